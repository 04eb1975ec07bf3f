"""Command-line entry point.

    rahman params --p 1 2 3 4 [--alpha A1 [A2]]
    rahman kernel --N 3 --alpha 1/2 1/3 --beta 1/5 1/7
    rahman polys --N 2 --p 1 2 3 4
    rahman verify {eigen|orth|stationary} --N 5 --p 1 2 3 4 [--alpha A1 [A2]]
    rahman bispectral {solve|reproduce|seven} --p 1 2 3 4 [--N 5] [--paper-layout]
    rahman commutant {discover|reproduce} --alpha A1 A2 --beta B1 B2 [--N 3]
    rahman simulate --N 3 --alpha .. --beta .. --steps 1000000 --seed 1

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 degenerate or incompatible parameters.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import bispectral, kernel, params, polyeval, serialize, simulator, spectral
from .errors import DegenerateParams, GaugeUnsolvable, IncompatibleParams, SingularPolyMatrix
from .statespace import adjacency, diagonal_pattern, enumerate_simplex, full_pattern

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DEGENERATE = 0, 1, 2, 3


class UsageError(Exception):
    exit_code = EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return serialize.parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


@dataclass
class RunConfig:
    command: str
    action: str | None = None
    N: int | None = None
    p: list[Fraction] | None = None
    alpha: list[Fraction] | None = None
    beta: list[Fraction] | None = None
    seed: int = 0
    steps: int = 100_000
    start: tuple[int, int] = (0, 0)
    format: str = "json"
    float_digits: int = 12
    anchors: list[tuple[tuple[int, int], Fraction]] = field(default_factory=list)
    pattern: str = "adjacency"
    paper_layout: bool = False
    significance: float = 0.001
    min_visits: int = 1000
    output: str | None = None


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--N", type=_positive_int, help="simplex size (number of dice)")
    common.add_argument("--p", nargs=4, type=_rational, metavar="P", help="polynomial parameters p1..p4")
    common.add_argument("--alpha", nargs="+", type=_rational, metavar="A",
                        help="alpha1 [alpha2]; alpha2 defaults to the compatible value")
    common.add_argument("--beta", nargs=2, type=_rational, metavar="B")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--float-digits", type=int, default=12)
    common.add_argument("--output", "-o", help="write to this file instead of stdout")

    parser = _Parser(prog="rahman", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("params", parents=[common])
    sub.add_parser("kernel", parents=[common])
    sub.add_parser("polys", parents=[common])

    verify = sub.add_parser("verify")
    vsub = verify.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("eigen", "orth", "stationary"):
        vsub.add_parser(name, parents=[common])

    bisp = sub.add_parser("bispectral")
    bsub = bisp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("solve", "reproduce", "seven"):
        b = bsub.add_parser(name, parents=[common])
        b.add_argument("--paper-layout", action="store_true",
                       help="print the N=5 rows with named entries")

    comm = sub.add_parser("commutant")
    csub = comm.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("discover", "reproduce"):
        c = csub.add_parser(name, parents=[common])
        c.add_argument("--pattern", choices=("adjacency", "diagonal", "full"), default="adjacency")
        c.add_argument("--anchor", nargs=3, action="append", metavar=("ROW", "COL", "VALUE"),
                       help="0-based gauge anchor; give exactly two")

    sim = sub.add_parser("simulate", parents=[common])
    sim.add_argument("--steps", type=_positive_int, default=100_000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--start", nargs=2, type=int, default=[0, 0], metavar=("I1", "I2"))
    sim.add_argument("--significance", type=float, default=0.001)
    sim.add_argument("--min-visits", type=int, default=1000)
    return parser


def parse_config(argv) -> RunConfig:
    ns = _build_parser().parse_args(list(argv))
    cfg = RunConfig(command=ns.command, action=getattr(ns, "action", None))
    for name in ("N", "p", "beta", "format", "float_digits", "output"):
        setattr(cfg, name, getattr(ns, name, getattr(cfg, name)))
    if ns.alpha is not None:
        if len(ns.alpha) > 2:
            raise UsageError("--alpha: expected 1 or 2 values")
        cfg.alpha = ns.alpha
    for name in ("seed", "steps", "significance", "min_visits", "pattern", "paper_layout"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if getattr(ns, "start", None) is not None:
        cfg.start = tuple(ns.start)
    if getattr(ns, "anchor", None):
        if len(ns.anchor) != 2:
            raise UsageError("--anchor: give exactly two anchors")
        try:
            cfg.anchors = [((int(r), int(c)), _rational(v)) for r, c, v in ns.anchor]
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"--anchor: {exc}") from None
    if cfg.float_digits < 0:
        raise UsageError("--float-digits: must be >= 0")
    return cfg


# -- helpers -----------------------------------------------------------------

def _need(cfg: RunConfig, *names: str):
    for name in names:
        if getattr(cfg, name) is None:
            raise UsageError(f"{cfg.command}{' ' + cfg.action if cfg.action else ''}: --{name} is required")


def _pset(cfg: RunConfig) -> params.ParamSet:
    _need(cfg, "p")
    return params.ParamSet(*cfg.p)


def _alphas(cfg: RunConfig, p: params.ParamSet | None):
    _need(cfg, "alpha")
    a1 = cfg.alpha[0]
    if len(cfg.alpha) == 2:
        return a1, cfg.alpha[1]
    if p is None:
        raise UsageError("--alpha: two values needed without --p")
    return a1, params.compatible_alpha2(p, a1)


def _chain(cfg: RunConfig, N: int) -> params.ChainParams:
    """Chain parameters from --alpha/--beta, or from --p and --alpha via compatibility."""
    if cfg.beta is not None:
        _need(cfg, "alpha")
        if len(cfg.alpha) != 2:
            raise UsageError("--alpha: two values needed together with --beta")
        cp = params.ChainParams(cfg.alpha[0], cfg.alpha[1], *cfg.beta, N, algebraic=True)
        return replace(cp, algebraic=not cp.is_probability)
    p = _pset(cfg)
    a1, a2 = _alphas(cfg, p)
    return params.compatible_chain(p, a1, N, alpha2=a2)


def _matrix_payload(cfg: RunConfig, M, space, extra: dict | None = None) -> str:
    if cfg.format == "csv":
        return serialize.matrix_to_csv(M, cfg.float_digits, space)
    obj = {"matrix": serialize.matrix_to_json(M, space)}
    if extra:
        obj.update(extra)
    return serialize.dumps(obj)


def _eigen_payload(rep: spectral.EigenReport) -> dict:
    return {
        "claim": "eigen",
        "N": rep.N,
        "p": list(rep.p.as_tuple()),
        "chain": rep.chain,
        "compatibility_defect": rep.compatibility_defect,
        "passed": rep.passed,
        "eigenvalue_collisions": rep.collisions,
        "entries": [{"state": e.state, "eigenvalue": e.eigenvalue, "exact": e.exact,
                     "max_residual": e.max_residual, "witness": e.witness} for e in rep.entries],
    }


def _paper_layout_text(report: bispectral.ComparisonReport) -> str:
    lines = []
    for i, row in enumerate(report.labels):
        named = [(c, report.computed[i, j]) for j, c in enumerate(row) if c != "0"]
        cells = ", ".join(f"{c} = {serialize.format_scalar(v)}" for c, v in named)
        lines.append(f"row {i + 1}: [{', '.join(row)}]  {cells}")
    return "\n".join(lines) + "\n"


# -- commands ----------------------------------------------------------------

def _cmd_params(cfg):
    p = _pset(cfg)
    mp, wp = params.derive_mapped(p), params.derive_weight(p)
    out = {"p": list(p.as_tuple()), "mapped": mp, "weight": wp,
           "weight_is_probability": wp.is_probability, "generic": p.is_generic,
           "degeneracies": p.degeneracies()}
    if cfg.alpha is not None:
        a1, a2 = _alphas(cfg, p)
        b1, b2 = params.compatible_beta(p, a1, a2, strict=False)
        out["chain"] = {"alpha1": a1, "alpha2": a2, "beta1": b1, "beta2": b2,
                        "compatibility_defect": params.compatibility_defect(p, a1, a2),
                        "compatible_alpha2": params.compatible_alpha2(p, a1)}
    return serialize.dumps(out), EXIT_OK


def _cmd_kernel(cfg):
    _need(cfg, "N")
    kern = kernel.build_kernel(cfg.N, _chain(cfg, cfg.N))
    return _matrix_payload(cfg, kern.K, kern.space, {"chain": kern.cp}), EXIT_OK


def _cmd_polys(cfg):
    _need(cfg, "N")
    pm = polyeval.build_poly_matrix(cfg.N, _pset(cfg))
    return _matrix_payload(cfg, pm.M, pm.space, {"p": list(pm.p.as_tuple()), "invertible": True}), EXIT_OK


def _cmd_verify(cfg):
    _need(cfg, "N")
    p = _pset(cfg)
    if cfg.action == "orth":
        rep = spectral.verify_orthogonality(cfg.N, p)
        out = {"claim": "orthogonality", "N": cfg.N, "p": list(p.as_tuple()),
               "weight": rep.weight, "weight_is_probability": rep.weight.is_probability,
               "passed": rep.passed, "diagonal": rep.diagonal,
               "gram": serialize.matrix_to_json(rep.G, enumerate_simplex(cfg.N))}
        return serialize.dumps(out), EXIT_OK if rep.passed else EXIT_FAIL
    a1, a2 = _alphas(cfg, p)
    if cfg.action == "eigen":
        rep = spectral.verify_eigen(cfg.N, p, a1, a2)
        return serialize.dumps(_eigen_payload(rep)), EXIT_OK if rep.passed else EXIT_FAIL
    rep = spectral.verify_stationarity(cfg.N, p, a1, a2)
    out = {"claim": "stationarity", "N": cfg.N, "p": list(p.as_tuple()), "chain": rep.chain,
           "holds": rep.holds, "witness": rep.witness, "weight": rep.weight}
    # stationarity is a measured finding; deciding it is success either way
    return serialize.dumps(out), EXIT_OK


def _cmd_bispectral(cfg):
    p = _pset(cfg)
    if cfg.action == "reproduce":
        if cfg.N not in (None, 5):
            raise UsageError("bispectral reproduce: the closed-form operator exists only for N=5")
        rep = bispectral.reproduce_paper_B(p)
        if cfg.paper_layout:
            return _paper_layout_text(rep), EXIT_OK if rep.passed else EXIT_FAIL
        op = rep.extra["operator"]
        out = {"N": 5, "p": list(p.as_tuple()), "passed": rep.passed,
               "entries_compared": rep.compared, "mismatches": rep.mismatches,
               "five_point": op.stencil.conforms,
               "operator": serialize.matrix_to_json(op.B, enumerate_simplex(5))}
        return serialize.dumps(out), EXIT_OK if rep.passed else EXIT_FAIL
    _need(cfg, "N")
    space = enumerate_simplex(cfg.N)
    if cfg.action == "solve":
        op = bispectral.five_point_operator(cfg.N, p)
        ok = op.residual_zero and op.stencil.conforms
        if cfg.format == "csv":
            return serialize.matrix_to_csv(op.B, cfg.float_digits, space), EXIT_OK if ok else EXIT_FAIL
        out = {"N": cfg.N, "p": list(p.as_tuple()), "residual_zero": op.residual_zero,
               "stencil": {"conforms": op.stencil.conforms, "max_nonzeros": op.stencil.max_nonzeros,
                           "violations": op.stencil.violations},
               "pattern": sorted(adjacency(space, True).allowed),
               "operator": serialize.matrix_to_json(op.B, space)}
        return serialize.dumps(out), EXIT_OK if ok else EXIT_FAIL
    res = bispectral.seven_point_operators(cfg.N, p)
    ok = (res.linear_consistent and res.Bx.stencil.max_nonzeros <= 7
          and res.By.stencil.max_nonzeros <= 7)
    out = {"N": cfg.N, "p": list(p.as_tuple()), "linear_consistent": res.linear_consistent,
           "Bx": {"max_nonzeros": res.Bx.stencil.max_nonzeros, "offsets": res.stencil_offsets("x"),
                  "operator": serialize.matrix_to_json(res.Bx.B, space)},
           "By": {"max_nonzeros": res.By.stencil.max_nonzeros, "offsets": res.stencil_offsets("y"),
                  "operator": serialize.matrix_to_json(res.By.B, space)}}
    return serialize.dumps(out), EXIT_OK if ok else EXIT_FAIL


def _cmd_commutant(cfg):
    if cfg.action == "reproduce":
        _need(cfg, "alpha", "beta")
        if len(cfg.alpha) != 2:
            raise UsageError("--alpha: two values needed")
        anchors = cfg.anchors or bispectral.DEFAULT_ANCHORS
        rep = bispectral.reproduce_paper_commutant(*cfg.alpha, *cfg.beta, anchors=anchors)
        out = {"N": 3, "alpha": cfg.alpha, "beta": cfg.beta, "dimension": rep.extra["dimension"],
               "passed": rep.passed, "mismatches": rep.mismatches,
               "normalized": serialize.matrix_to_json(rep.computed, enumerate_simplex(3))}
        return serialize.dumps(out), EXIT_OK if rep.passed else EXIT_FAIL
    N = cfg.N or 3
    kern = kernel.build_kernel(N, _chain(cfg, N))
    pattern = {"adjacency": lambda s: adjacency(s, with_diagonal=True),
               "diagonal": diagonal_pattern, "full": full_pattern}[cfg.pattern](kern.space)
    found = bispectral.discover_commutant(kern, pattern)
    out = {"N": N, "chain": kern.cp, "pattern": cfg.pattern, "dimension": found.dimension,
           "contains_identity": found.contains_identity(),
           "basis": [serialize.matrix_to_json(m, kern.space) for m in found.basis]}
    if cfg.anchors:
        M = found.non_scalar_element()
        if M is not None:
            out["normalized"] = serialize.matrix_to_json(bispectral.normalize_gauge(M, cfg.anchors), kern.space)
    return serialize.dumps(out), EXIT_OK


def _cmd_simulate(cfg):
    _need(cfg, "N")
    cp = _chain(cfg, cfg.N)
    tc = simulator.run_chain(cfg.start, cfg.steps, cp, cfg.seed)
    if cfg.format == "csv":
        return tc.to_csv(), EXIT_OK
    rep = simulator.chi_square_vs_kernel(tc, kernel.build_kernel(cfg.N, cp),
                                         cfg.significance, cfg.min_visits)
    out = {"N": cfg.N, "chain": cp, "steps": cfg.steps, "seeds": tc.seeds, "rng": tc.rng,
           "start": list(cfg.start), "passed": rep.passed, "significance": rep.significance,
           "rows": rep.rows, "counts": tc.counts}
    return serialize.dumps(out), EXIT_OK if rep.passed else EXIT_FAIL


_COMMANDS = {"params": _cmd_params, "kernel": _cmd_kernel, "polys": _cmd_polys,
             "verify": _cmd_verify, "bispectral": _cmd_bispectral,
             "commutant": _cmd_commutant, "simulate": _cmd_simulate}


def run(argv) -> tuple[str, int]:
    """Run one command; returns (output text, exit code) without touching stdio."""
    cfg = parse_config(argv)
    return _COMMANDS[cfg.command](cfg)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        text, code = _COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateParams, IncompatibleParams, SingularPolyMatrix, GaugeUnsolvable) as exc:
        print(f"rahman: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"rahman: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
