"""Command-line front end.

Subcommands: ``solve``, ``wavefunction``, ``verify``, ``scan-conventions``
and ``dump-config``. Problems come from a flat ``key = value`` config file
(``#`` starts a comment, lists are comma separated), overridden by flags.

Exit codes
----------
0  success
1  configuration error
2  no bound state / no root (``solve``, ``wavefunction``)
3  at least one FAIL (``verify``)
"""

import argparse
import csv
from dataclasses import dataclass, fields
from importlib import resources
import io
import json
import logging
import math
import sys

from .eigensolver import SolverConfig, admissible_domain, solve_batch, solve_energy
from .errors import ConfigError, DiracMorseError, EmptyDomain, NoEigenvalue, NoRoot, NonDecayingBoundary
from .morse_model import MODES, PDM, MorseProblem, quantum_numbers_from_kappa, state_label
from .ode_oracle import pekeris_error_report, shoot_eigenvalue
from .units_presets import CONVENTIONS, RAW, co_preset, convention_scan, to_internal
from .wavefunctions import bound_state, normalize, value_at_r

EXIT_OK, EXIT_CONFIG, EXIT_NO_STATE, EXIT_FAIL = 0, 1, 2, 3
PRESETS = {"CO": co_preset}
VERIFY_THRESHOLD = 1e-6

log = logging.getLogger(__name__)


def fmt(x):
    """Nine significant digits, the precision of the tabulated energies."""
    if x is None:
        return ""
    return f"{x + 0.0:.9g}"  # + 0.0 turns -0.0 into 0.0


@dataclass(frozen=True)
class RunConfig:
    mode: str | None = None
    D: float | None = None
    r0: float | None = None
    a: float | None = None
    m0: float | None = None
    A: float | None = None
    kappa: tuple = ()
    n: tuple = (0,)
    convention: str = RAW
    preset: str | None = None
    tol: float = 1e-12
    form: str = "bound"
    branch: str = "auto"
    out: str | None = None

    def physical(self):
        """(D, r0, a, m0) in internal units; preset values fill unset fields."""
        vals = {k: getattr(self, k) for k in ("D", "r0", "a", "m0")}
        if self.preset is not None:
            p = to_internal(PRESETS[self.preset](), self.convention)
            for k in vals:
                if vals[k] is None:
                    vals[k] = getattr(p, k)
        return vals

    def validate(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {self.mode!r}")
        if self.preset is not None and self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}")
        if self.convention not in CONVENTIONS:
            raise ConfigError(f"convention must be one of {', '.join(CONVENTIONS)}")
        missing = [k for k, v in self.physical().items() if v is None]
        if missing:
            raise ConfigError(f"missing parameters: {', '.join(missing)}")
        if self.mode != PDM and self.A is None:
            raise ConfigError(f"A is required in {self.mode} mode")
        if self.mode == PDM and self.A not in (None, 0.0):
            raise ConfigError("A is not used in pdm mode")
        if not self.kappa:
            raise ConfigError("kappa list is empty")
        if any(k == 0 for k in self.kappa):
            raise ConfigError("kappa must be nonzero")
        if not self.n:
            raise ConfigError("n list is empty")
        if any(v < 0 for v in self.n):
            raise ConfigError("n must be nonnegative")
        try:
            self.solver()
            self.problem(self.kappa[0])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return self

    def solver(self):
        return SolverConfig(abs_tol=self.tol, form=self.form, branch=self.branch)

    def problem(self, kappa):
        v = self.physical()
        return MorseProblem.build(self.mode, v["D"], v["r0"], v["a"], v["m0"], kappa, self.A or 0.0)


_FLOAT_KEYS = {"D", "r0", "a", "m0", "A", "tol"}
_INT_LIST_KEYS = {"kappa", "n"}
CONFIG_KEYS = tuple(f.name for f in fields(RunConfig))


def _convert(key, raw):
    if key in _FLOAT_KEYS:
        v = float(raw)
        if not math.isfinite(v):
            raise ValueError(f"{raw!r} is not finite")
        return v
    if key in _INT_LIST_KEYS:
        items = [t.strip() for t in raw.split(",") if t.strip()]
        return tuple(int(t) for t in items)
    return raw


def parse_config_text(text, source="<config>"):
    """Parse ``key = value`` lines into a dict of typed values."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line.strip()!r}")
        key, raw = (t.strip() for t in body.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _convert(key, raw)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {exc}") from exc
    return out


def dump_config(cfg):
    lines = []
    for f in fields(RunConfig):
        v = getattr(cfg, f.name)
        if v is None:
            continue
        if isinstance(v, tuple):
            v = ", ".join(str(t) for t in v)
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"


def build_config(args):
    values = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        values.update(parse_config_text(text, args.config))
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            try:
                values[key] = _convert(key, v) if isinstance(v, str) else v
            except ValueError as exc:
                raise ConfigError(f"--{key}: {exc}") from exc
    return RunConfig(**values)


def _label(n, qn):
    # n counts radial nodes, so the spectroscopic prefix is n + 1
    return state_label(n + 1, qn.ell, qn.j)


def _write_csv(path, header, rows):
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    text = buf.getvalue()
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _print_table(header, rows):
    widths = [max(len(str(h)), *(len(str(r[i])) for r in rows)) if rows else len(str(h)) for i, h in enumerate(header)]
    for line in [header, *rows]:
        print("  ".join(str(c).rjust(w) for c, w in zip(line, widths)))


SOLVE_HEADER = ["mode", "kappa", "ell", "ell_tilde", "label", "n", "E", "residual", "w1", "w2"]


def cmd_solve(cfg):
    jobs = [(cfg.problem(k), n) for k in cfg.kappa for n in cfg.n]
    results = solve_batch(jobs, cfg.solver())
    rows = []
    for (problem, n), res in zip(jobs, results):
        qn = quantum_numbers_from_kappa(problem.kappa, n)
        if isinstance(res, Exception):
            print(f"kappa={problem.kappa} n={n}: {type(res).__name__}: {res}", file=sys.stderr)
            continue
        for bad in res.unconverged:
            print(f"kappa={problem.kappa} n={n}: root near E={bad.E!r} not converged "
                  f"(|residual|={abs(bad.residual):.3g})", file=sys.stderr)
        for root in res.roots:
            st = bound_state(problem, root.E, n)
            rows.append([cfg.mode, problem.kappa, qn.ell, qn.ell_tilde, _label(n, qn), n,
                         fmt(root.E), fmt(root.residual), fmt(st.w1), fmt(st.w2)])
    _print_table(SOLVE_HEADER, rows)
    if cfg.out:
        _write_csv(cfg.out, SOLVE_HEADER, rows)
    return EXIT_OK if rows else EXIT_NO_STATE


def cmd_wavefunction(cfg, r_lo, r_hi, count, root_index=0):
    kappa, n = cfg.kappa[0], cfg.n[0]
    problem = cfg.problem(kappa)
    try:
        roots = solve_energy(problem, n, cfg.solver()).roots
    except (EmptyDomain, NoRoot) as exc:
        print(f"no bound state for kappa={kappa} n={n}: {exc}", file=sys.stderr)
        return EXIT_NO_STATE
    if not roots or root_index >= len(roots):
        print(f"no converged root #{root_index} for kappa={kappa} n={n}", file=sys.stderr)
        return EXIT_NO_STATE
    raw = bound_state(problem, roots[root_index].E, n)
    state = normalize(raw)
    if not (0 < r_lo < r_hi) or count < 2:
        raise ConfigError("need 0 < r-lo < r-hi and count >= 2")
    pot = problem.potential
    rows = []
    for i in range(count):
        r = r_lo + (r_hi - r_lo) * i / (count - 1)
        s = float(pot.s_of_r(r))
        # 17 digits so that s and r round-trip exactly
        rows.append([f"{r:.17g}", f"{s:.17g}", f"{float(value_at_r(raw, r)):.17g}",
                     f"{float(value_at_r(state, r)):.17g}"])
    _write_csv(cfg.out, ["r", "s", "value", "value_normalized"], rows)
    return EXIT_OK


VERIFY_HEADER = ["id", "mode", "kappa", "n", "E_closed", "E_oracle", "rel_dev", "nodes", "pekeris_err", "status"]


def load_suite(path=None):
    """Committed oracle suite (list of dicts with mode, D, r0, a, m0, A, kappa, n, id)."""
    if path in (None, "default"):
        text = resources.files("diracmorse").joinpath("data/oracle_suite.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def verify_state(problem, n, solver, inject=0.0, pekeris=True, threshold=VERIFY_THRESHOLD):
    """One verification row: closed form against the approximated-ODE shooting oracle."""
    try:
        roots = solve_energy(problem, n, solver).roots
    except (EmptyDomain, NoRoot):
        return dict(E_closed=None, E_oracle=None, rel_dev=None, nodes=None, pekeris_err=None, status="SKIPPED")
    if not roots:
        return dict(E_closed=None, E_oracle=None, rel_dev=None, nodes=None, pekeris_err=None, status="SKIPPED")
    E = roots[0].E
    E_test = E + inject * abs(E)
    bracket = next(iv for iv in admissible_domain(problem) if iv[0] <= E <= iv[1])
    try:
        shot = shoot_eigenvalue(problem, n, bracket)
    except (NoEigenvalue, NonDecayingBoundary) as exc:
        log.info("oracle failed: %s", exc)
        return dict(E_closed=E_test, E_oracle=None, rel_dev=None, nodes=None, pekeris_err=None, status="FAIL")
    dev = abs(E_test - shot.E) / abs(shot.E)
    pk = None
    if pekeris:
        try:
            pk = pekeris_error_report(problem, bound_state(problem, E, n), bracket)
        except (NoEigenvalue, NonDecayingBoundary):
            pk = math.nan
    ok = dev <= threshold and shot.nodes == n
    return dict(E_closed=E_test, E_oracle=shot.E, rel_dev=dev, nodes=shot.nodes, pekeris_err=pk,
                status="PASS" if ok else "FAIL")


def cmd_verify(cfg, suite=None, inject=0.0, pekeris=True):
    if suite is not None:
        cases = [(e.get("id", ""), MorseProblem.build(e["mode"], e["D"], e["r0"], e["a"], e["m0"], e["kappa"],
                                                     e.get("A", 0.0)), e["n"]) for e in load_suite(suite)]
    else:
        cases = [(f"k{k}-n{n}", cfg.problem(k), n) for k in cfg.kappa for n in cfg.n]
    solver = cfg.solver()
    rows, failed = [], False
    for ident, problem, n in cases:
        r = verify_state(problem, n, solver, inject, pekeris)
        failed |= r["status"] == "FAIL"
        rows.append([ident, problem.mode.kind, problem.kappa, n, fmt(r["E_closed"]), fmt(r["E_oracle"]),
                     fmt(r["rel_dev"]), "" if r["nodes"] is None else r["nodes"], fmt(r["pekeris_err"]),
                     r["status"]])
    _print_table(VERIFY_HEADER, rows)
    if cfg.out:
        _write_csv(cfg.out, VERIFY_HEADER, rows)
    return EXIT_FAIL if failed else EXIT_OK


SCAN_HEADER = ["convention", "kappa", "ell_tilde", "label", "target", "n", "status", "n_roots", "E",
               "deviation", "residual", "n_unresolved"]


def scan_rows(report):
    rows = []
    for e in report.entries:
        if e.energies:
            i = min(range(len(e.energies)), key=lambda k: e.deviations[k])
            E, dev, res = e.energies[i], e.deviations[i], e.residuals[i]
        else:
            E = dev = res = None
        rows.append([e.convention, e.row.kappa, e.row.ell_tilde, e.row.label, fmt(e.row.energy), e.n, e.status,
                     len(e.energies), fmt(E), fmt(dev), fmt(res), len(e.unresolved)])
    return rows


def cmd_scan_conventions(cfg, form="reference"):
    preset = PRESETS[cfg.preset or "CO"]()
    report = convention_scan(preset, form=form, config=SolverConfig(abs_tol=cfg.tol, form=form, branch="any"))
    rows = scan_rows(report)
    _print_table(SCAN_HEADER, rows)
    summary = report.summary()
    print(summary)
    if cfg.out:
        _write_csv(cfg.out, SCAN_HEADER, rows)
        stem = cfg.out.rsplit(".", 1)[0] if cfg.out.endswith(".csv") else cfg.out
        with open(stem + ".txt", "w", encoding="utf-8", newline="") as fh:
            fh.write(summary + "\n")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors: exit 1, not argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _join_list_flags(argv):
    # "--kappa -1,-2" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for tok in it:
        if tok in ("--kappa", "--n"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--mode", choices=MODES)
    for name in ("D", "r0", "a", "m0", "A", "tol"):
        common.add_argument(f"--{name}", type=float)
    common.add_argument("--kappa", help="comma-separated list, e.g. -1,-2")
    common.add_argument("--n", help="comma-separated radial degrees")
    common.add_argument("--convention", choices=CONVENTIONS)
    common.add_argument("--preset", choices=sorted(PRESETS))
    common.add_argument("--form", choices=("bound", "reference"))
    common.add_argument("--branch", choices=("auto", "negative", "positive", "any"))
    common.add_argument("--out", help="output CSV path")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="diracmorse", description="Dirac-Morse bound states via the parametric NU method")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="closed-form energies per (kappa, n)")
    w = sub.add_parser("wavefunction", parents=[common], help="sample the spinor component as CSV")
    w.add_argument("--r-lo", type=float, default=None)
    w.add_argument("--r-hi", type=float, default=None)
    w.add_argument("--count", type=int, default=201)
    w.add_argument("--root-index", type=int, default=0)
    v = sub.add_parser("verify", parents=[common], help="compare with the shooting oracle")
    v.add_argument("--suite", help="JSON suite file, or 'default' for the bundled one")
    v.add_argument("--inject-error", type=float, default=0.0, help="relative offset added to closed-form E")
    v.add_argument("--skip-pekeris", action="store_true")
    s = sub.add_parser("scan-conventions", parents=[common], help="unit-convention scan against the CO reference energies")
    s.add_argument("--scan-form", choices=("reference", "bound"), default="reference")
    sub.add_parser("dump-config", parents=[common], help="print the merged config")
    return p


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = _parser().parse_args(_join_list_flags(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        cfg = build_config(args)
        if args.command == "dump-config":
            sys.stdout.write(dump_config(cfg))
            return EXIT_OK
        if args.command == "scan-conventions":
            return cmd_scan_conventions(cfg, args.scan_form)
        if args.command == "verify" and args.suite is not None:
            return cmd_verify(cfg, suite=args.suite, inject=args.inject_error, pekeris=not args.skip_pekeris)
        cfg.validate()
        if args.command == "solve":
            return cmd_solve(cfg)
        if args.command == "wavefunction":
            pot = cfg.problem(cfg.kappa[0]).potential
            r_lo = args.r_lo if args.r_lo is not None else pot.r0 * 0.25
            r_hi = args.r_hi if args.r_hi is not None else pot.r0 + 20.0 / pot.a
            return cmd_wavefunction(cfg, r_lo, r_hi, args.count, args.root_index)
        return cmd_verify(cfg, inject=args.inject_error, pekeris=not args.skip_pekeris)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DiracMorseError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NO_STATE


if __name__ == "__main__":
    sys.exit(main())
