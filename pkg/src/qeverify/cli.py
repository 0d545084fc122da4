"""qeverify command line: single evaluations, verification suites, envelope tables."""
from __future__ import annotations

import csv
import json
import sys
from decimal import Decimal, InvalidOperation

import click
import mpmath
from mpmath import mp, mpf

from . import archimedean as arch
from . import forms, lfun, verify
from .special_core import AccuracyError, DomainError
from .whittaker import WhittakerParams, whittaker_w

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_MISSING = 0, 1, 2, 3


class ExactDecimal(click.ParamType):
    """Decimal literal parsed exactly and handed on as an mpf at working precision."""
    name = "decimal"

    def convert(self, value, param, ctx):
        if isinstance(value, mpmath.mpf):
            return value
        try:
            Decimal(str(value))
        except InvalidOperation:
            self.fail(f"{value!r} is not a decimal number", param, ctx)
        return str(value)


DEC = ExactDecimal()


def _num(text):
    return mpf(text) if text is not None else None


def _emit(label, value, error=None, extra=None):
    value = mpmath.mpmathify(value)
    click.echo(f"{label} = {mpmath.nstr(value, 30)}")
    rec = {"subject": label, "re": mpmath.nstr(mpmath.re(value), 30), "im": mpmath.nstr(mpmath.im(value), 30)}
    if error is not None:
        rec["error_estimate"] = mpmath.nstr(error, 3)
    rec.update(extra or {})
    click.echo(json.dumps(rec, sort_keys=True))


@click.group(context_settings={"auto_envvar_prefix": "QEVERIFY"})
@click.option("--precision-bits", type=click.IntRange(32, 4096), default=128, show_default=True)
@click.pass_context
def main(ctx, precision_bits):
    """High-precision evaluation and verification of Whittaker-function identities."""
    ctx.ensure_object(dict)
    ctx.obj["bits"] = precision_bits
    mp.prec = precision_bits


@main.group("eval")
def eval_group():
    """Single evaluations."""


def _guard(fn):
    try:
        return fn()
    except DomainError as exc:
        raise click.UsageError(str(exc))
    except AccuracyError as exc:
        click.echo(f"accuracy failure: {exc} (best {exc.best}, error {exc.error_estimate})", err=True)
        sys.exit(EXIT_FAIL)


@eval_group.command("whittaker")
@click.option("--alpha", type=DEC, required=True)
@click.option("--beta", type=DEC, default="0", help="real part of beta")
@click.option("--beta-imag", type=DEC, default="0", help="imaginary part of beta")
@click.option("--y", "y", type=DEC, required=True)
def eval_whittaker(alpha, beta, beta_imag, y):
    p = WhittakerParams(_num(alpha), mpmath.mpc(_num(beta), _num(beta_imag)))
    _emit(f"W[{alpha},{beta}+{beta_imag}i]({y})", _guard(lambda: whittaker_w(p, _num(y))), extra={"family": p.family})


@eval_group.command("ik")
@click.option("--k", type=int, required=True)
@click.option("--alpha", type=DEC, required=True)
@click.option("--beta", type=DEC, required=True)
@click.option("--gamma", type=DEC, required=True)
@click.option("--method", type=click.Choice(["closed", "quadrature"]), default="closed")
def eval_ik(k, alpha, beta, gamma, method):
    a, b, g = _num(alpha), _num(beta), _num(gamma)
    if method == "closed":
        _emit(f"I_{k}({alpha},{beta},{gamma})", _guard(lambda: arch.i_k_closed(k, a, b, g)))
    else:
        val, err = _guard(lambda: arch.i_k_quadrature(k, a, b, g, with_error=True))
        _emit(f"I_{k}({alpha},{beta},{gamma})", val, err)


@eval_group.command("ikl")
@click.option("--k", type=int, required=True)
@click.option("--ell", type=int, required=True)
@click.option("--r", type=DEC, required=True)
@click.option("--method", type=click.Choice(["closed", "quadrature"]), default="closed")
def eval_ikl(k, ell, r, method):
    if method == "closed":
        _emit(f"I_{{{k},{ell}}}({r})", _guard(lambda: arch.i_kl_closed(k, ell, _num(r))))
    else:
        val, err = _guard(lambda: arch.i_kl_quadrature(k, ell, _num(r), with_error=True))
        _emit(f"I_{{{k},{ell}}}({r})", val, err)


@eval_group.command("lfun")
@click.option("--kind", type=click.Choice(["zeta", "delta", "delta-ad", "maass-ad"]), required=True)
@click.option("--s-re", type=DEC, default="0.5")
@click.option("--s-im", type=DEC, default="0")
@click.option("--balance", type=DEC, default="1", help="AFE balance point X")
@click.option("--fixtures", type=click.Path(), default=forms.FIXTURE_PATH)
def eval_lfun(kind, s_re, s_im, balance, fixtures):
    s = mpmath.mpc(_num(s_re), _num(s_im))
    if kind == "zeta":
        spec = lfun.zeta_spec()
    elif kind == "delta":
        spec = lfun.hol_spec(forms.delta_form(2000), 2000)
    elif kind == "delta-ad":
        spec = lfun.hol_ad_spec(forms.delta_form(2000), 2000)
    else:
        phi = _first_maass_or_exit(fixtures)
        spec = lfun.maass_ad_spec(phi)
    val = _guard(lambda: lfun.afe_value(spec, s, _num(balance)))
    _emit(f"{spec.completed_label} at s={mpmath.nstr(s, 10)}", val,
          extra={"analytic_conductor": mpmath.nstr(lfun.analytic_conductor(spec, s), 10)})


def _first_maass_or_exit(path):
    try:
        return forms.first_maass(forms.ingest_forms(path))
    except FileNotFoundError:
        click.echo(f"missing fixture file: {path}", err=True)
        sys.exit(EXIT_MISSING)
    except forms.FixtureError as exc:
        click.echo(f"fixture problem in {path}: {exc}", err=True)
        sys.exit(EXIT_MISSING)


@eval_group.command("form")
@click.option("--kind", type=click.Choice(["maass", "hol", "eis"]), required=True)
@click.option("--k", type=int, default=0, help="weight 2k index")
@click.option("--x", type=DEC, required=True)
@click.option("--y", "y", type=DEC, required=True)
@click.option("--t", type=DEC, default="0", help="Eisenstein spectral parameter")
@click.option("--fixtures", type=click.Path(), default=forms.FIXTURE_PATH)
def eval_form(kind, k, x, y, t, fixtures):
    z = mpmath.mpc(_num(x), _num(y))
    if kind == "maass":
        phi = _first_maass_or_exit(fixtures)
        val, tail = _guard(lambda: forms.eval_maass_shifted(phi, k, z, with_tail=True))
    elif kind == "hol":
        F = forms.delta_form(2000)
        val, tail = _guard(lambda: forms.eval_hol_shifted(F, k if k else F.ell, z, with_tail=True))
    else:
        val, tail = _guard(lambda: forms.eval_eisenstein(forms.EisensteinParams(_num(t), k), z, with_tail=True))
    _emit(f"{kind}(k={k}) at {mpmath.nstr(z, 10)}", val, tail)


@main.command("verify")
@click.argument("suite_arg", required=False, type=click.Choice(verify.SUITES + ("all",)))
@click.option("--suite", type=click.Choice(verify.SUITES + ("all",)), default=None)
@click.option("--rel-tol", type=DEC, default="1e-11", show_default=True)
@click.option("--fixtures", type=click.Path(), default=forms.FIXTURE_PATH, show_default=True)
@click.option("--out", type=click.Path(), default=".", show_default=True)
@click.option("--extended", is_flag=True, default=False, help="include the costly central-value tiers")
@click.option("--timestamp", type=DEC, default=None, hidden=True)
@click.pass_context
def verify_cmd(ctx, suite_arg, suite, rel_tol, fixtures, out, extended, timestamp):
    """Run a verification suite; writes reports.jsonl and reports.csv into --out."""
    name = suite or suite_arg or "all"
    cfg = verify.RunConfig(ctx.obj["bits"], float(Decimal(rel_tol)), fixtures, out, extended, name)
    try:
        reps = verify.run_suite(name, cfg)
    except verify.MissingFixture as exc:
        click.echo(f"SKIPPED {name}: fixture file not found: {exc}", err=True)
        sys.exit(EXIT_MISSING)
    for r in reps:
        click.echo(str(r))
    jpath, cpath = verify.write_reports(reps, out, timestamp=float(timestamp) if timestamp else None)
    failed = sum(not r.passed for r in reps)
    click.echo(f"{len(reps) - failed}/{len(reps)} passed; wrote {jpath} and {cpath}")
    sys.exit(EXIT_FAIL if failed else EXIT_OK)


@main.command("profile")
@click.option("--kind", type=click.Choice(["eis", "maass", "hol"]), required=True)
@click.option("--delta", type=DEC, default="0.01")
@click.option("--A", "A", type=DEC, default="0.25")
@click.option("--eps", type=DEC, default="0")
@click.option("--t", type=DEC, default="0")
@click.option("--grid", default="10:200:20", show_default=True, help="start:stop:count over r")
@click.option("--out", type=click.Path(), default="-")
def profile_cmd(kind, delta, A, eps, t, grid, out):
    """Tabulate a theorem envelope over a grid of spectral parameters (CSV)."""
    try:
        start, stop, count = grid.split(":")
        start, stop, count = mpf(start), mpf(stop), int(count)
    except ValueError:
        raise click.UsageError("grid must be start:stop:count")
    if count < 1:
        raise click.UsageError("grid count must be positive")
    rows = []
    for j in range(count):
        r = start + (stop - start) * j / max(count - 1, 1)
        env = _guard(lambda: verify.theorem_envelope(kind, _num(delta), _num(A), r_j=r, t=_num(t), r_l=r,
                                                     eps=_num(eps)))
        rows.append((mpmath.nstr(r, 12), mpmath.nstr(env, 15)))
    fh = sys.stdout if out == "-" else open(out, "w", newline="", encoding="utf-8")
    w = csv.writer(fh)
    w.writerow(["r", f"envelope_{kind}"])
    w.writerows(rows)
    if fh is not sys.stdout:
        fh.close()


@main.command("ingest")
@click.argument("path", type=click.Path())
def ingest_cmd(path):
    """Validate a fixture file (Hecke relations) and list its records."""
    try:
        recs = forms.ingest_forms(path)
    except FileNotFoundError:
        click.echo(f"missing fixture file: {path}", err=True)
        sys.exit(EXIT_MISSING)
    except forms.FixtureError as exc:
        click.echo(f"invalid fixture: {exc}", err=True)
        sys.exit(EXIT_FAIL)
    for f in recs:
        if isinstance(f, forms.MaassFormData):
            click.echo(f"maass r={mpmath.nstr(f.r, 20)} parity={f.parity} coefficients<= {f.available()}")
        else:
            click.echo(f"holomorphic weight {2 * f.ell} coefficients<= {f.available()}")


if __name__ == "__main__":
    main()
