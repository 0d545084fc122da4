"""Comparison records shared by the checking code."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import mpmath


def _num_str(x, digits=25):
    return mpmath.nstr(x, digits, min_fixed=-5, max_fixed=5) if x is not None else None


@dataclass
class VerificationReport:
    label: str
    lhs: object
    rhs: object
    abs_err: float
    rel_err: float
    tolerance: float
    passed: bool
    config_echo: dict = field(default_factory=dict)
    mode: str = "relative"

    @classmethod
    def compare(cls, label, lhs, rhs, tolerance, config=None, abs_scale=None):
        """Relative comparison, switching to absolute when rhs is (near) zero.

        ``abs_scale`` sets the magnitude below which rhs counts as zero; the
        absolute test then uses tolerance directly.
        """
        lhs = mpmath.mpmathify(lhs)
        rhs = mpmath.mpmathify(rhs)
        diff = abs(lhs - rhs)
        scale = abs(rhs)
        near_zero = scale == 0 or (abs_scale is not None and scale <= abs_scale)
        rel = float(diff / scale) if scale != 0 else float("inf")
        if near_zero:
            passed = float(diff) <= tolerance
            mode = "absolute"
        else:
            passed = rel <= tolerance
            mode = "relative"
        return cls(label, lhs, rhs, float(diff), rel, float(tolerance), bool(passed),
                   dict(config or {}), mode)

    @classmethod
    def bound(cls, label, value, bound, config=None):
        """Upper-bound check: passes when value <= bound; rel_err is the relative excess."""
        value, bound = mpmath.mpf(value), mpmath.mpf(bound)
        excess = max(value - bound, mpmath.mpf(0))
        return cls(label, value, bound, float(excess), float(excess / bound), 0.0, bool(value <= bound),
                   dict(config or {}), "bound")

    @property
    def pass_(self):
        return self.passed

    def to_dict(self):
        lhs, rhs = mpmath.mpc(self.lhs), mpmath.mpc(self.rhs)
        return {
            "label": self.label,
            "lhs_re": _num_str(lhs.real), "lhs_im": _num_str(lhs.imag),
            "rhs_re": _num_str(rhs.real), "rhs_im": _num_str(rhs.imag),
            "abs_err": f"{self.abs_err:.6e}",
            "rel_err": f"{self.rel_err:.6e}",
            "tolerance": f"{self.tolerance:.3e}",
            "mode": self.mode,
            "pass": self.passed,
            "config_echo": {k: str(v) for k, v in sorted(self.config_echo.items())},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def __str__(self):
        flag = "PASS" if self.passed else "FAIL"
        err = self.abs_err if self.mode == "absolute" else self.rel_err
        return f"{flag} {self.label}: {self.mode} err {err:.3e} (tol {self.tolerance:.1e})"
