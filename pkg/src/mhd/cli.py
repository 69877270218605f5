"""Command line interface: ``mhd <subcommand>``.

Mode indices on the command line are 1-based (``--input 2,3`` means the
second and third modes); everything inside the library is 0-based.

Exit status: 0 success, 1 user error, 2 internal invariant failure.
"""
import argparse
import csv
import io
import json
import sys
from dataclasses import astuple, dataclass, fields

import numpy as np

from . import decomposition as dec
from . import generator as gen
from . import network as netw
from . import scattershot as ss
from . import selftest
from . import two_photon_stats as tps
from .errors import ConsistencyError, DomainError, MHDError
from .matrix_core import DEFAULT_TOL, mat_to_json, read_matrix

PROFILE_TOL = 1e-12
INVARIANCE_TOL = 1e-10


@dataclass(frozen=True)
class ProfileRow:
    theta: float
    p_AB: float
    p_A2: float
    p_B2: float
    phi_equivalent: float

    def __post_init__(self):
        total = self.p_AB + self.p_A2 + self.p_B2
        if abs(total - 1.0) > PROFILE_TOL:
            raise ConsistencyError(f"profile row at theta={self.theta} sums to {total!r}")


@dataclass(frozen=True)
class ResourceRow:
    n: int
    chi: float
    p_D: float
    p_L: float | None
    p_Lprime: float
    best_architecture: str


def parse_theta(text, m):
    """``"dip"`` -> ``theta_dip(m)``, anything else -> float."""
    if str(text).strip().lower() == "dip":
        return netw.theta_dip(m)
    try:
        return float(text)
    except ValueError as exc:
        raise DomainError(f"cannot parse theta {text!r}") from exc


def parse_grid(spec, m):
    """``start:end:count`` (either end may be ``dip``) -> evenly spaced angles."""
    parts = str(spec).split(":")
    if len(parts) != 3:
        raise DomainError(f"theta grid must be start:end:count, got {spec!r}")
    start, end = parse_theta(parts[0], m), parse_theta(parts[1], m)
    try:
        count = int(parts[2])
    except ValueError as exc:
        raise DomainError(f"grid count must be an integer, got {parts[2]!r}") from exc
    if count < 1:
        raise DomainError("grid count must be >= 1")
    return np.linspace(start, end, count)


def cmd_profile(m, thetas, input=None):
    """Coincidence and bunching profile over ``thetas``.

    Without an explicit input, every input pair is evaluated and required to
    agree before a single profile is returned.
    """
    g = gen.build(m)
    inputs = [input.check(m)] if input is not None else netw.all_inputs(m)
    rows = []
    for t in thetas:
        net = netw.build_network(g, t)
        points = np.array([tps.profile_point(net, inp, tps.grouping(g, inp)) for inp in inputs])
        spread = float(np.max(points.max(axis=0) - points.min(axis=0)))
        if spread > INVARIANCE_TOL:
            raise ConsistencyError(f"input invariance violated at theta={t}: spread {spread:.3e}")
        p_ab, p_a2, p_b2 = points[0]
        rows.append(ProfileRow(float(t), float(p_ab), float(p_a2), float(p_b2), tps.map_theta_to_phi(m, float(t))))
    return rows


def cmd_resources(ns, chi):
    if not 0.0 < chi < 1.0:
        raise DomainError(f"chi must lie in (0, 1), got {chi}")
    rows = []
    for n in ns:
        p = ss.SourceParams(n, chi)
        p_d, p_lp = ss.success_D(p), ss.success_Lprime(p)
        p_l = ss.success_L(p) if n % 2 == 0 else None
        # ties go to D: listed first, max() keeps the first maximum
        options = [("D", p_d), ("L", p_l), ("Lprime", p_lp)]
        best = max((o for o in options if o[1] is not None), key=lambda o: o[1])[0]
        rows.append(ResourceRow(n, chi, p_d, p_l, p_lp, best))
    return rows


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, np.integer)):
        return str(x)
    return format(x, ".17g")


def write_rows(rows, cls, comments=()):
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f.name for f in fields(cls)])
    for r in rows:
        w.writerow([_fmt(x) for x in astuple(r)])
    return buf.getvalue()


def _read_rows(text, convert):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return [convert(rec) for rec in csv.DictReader(lines)]


def read_profile_csv(text):
    return _read_rows(text, lambda r: ProfileRow(**{k: float(v) for k, v in r.items()}))


def read_resources_csv(text):
    def convert(r):
        return ResourceRow(
            n=int(r["n"]),
            chi=float(r["chi"]),
            p_D=float(r["p_D"]),
            p_L=float(r["p_L"]) if r["p_L"] else None,
            p_Lprime=float(r["p_Lprime"]),
            best_architecture=r["best_architecture"],
        )

    return _read_rows(text, convert)


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json_text(obj):
    return json.dumps(obj, indent=2) + "\n"


def _parse_range(text):
    try:
        lo, hi = (int(s) for s in text.split(":"))
    except ValueError as exc:
        raise DomainError(f"range must be lo:hi, got {text!r}") from exc
    return range(lo, hi + 1)


def run_gen(args):
    _emit(_json_text(mat_to_json(gen.build(args.m).Y)), args.out)


def run_validate(args):
    report = gen.validate(read_matrix(args.input_path), tol=args.tol)
    _emit(_json_text(report), args.out)


def run_net(args):
    net = netw.build_network(gen.build(args.m), parse_theta(args.theta, args.m))
    _emit(_json_text({**mat_to_json(net.D), "theta": net.theta}), args.out)


def run_stats(args):
    inp = netw.InputPair.from_one_based(args.input) if args.input else None
    rows = cmd_profile(args.m, parse_grid(args.theta_grid, args.m), inp)
    note = f"input={args.input}" if args.input else "input=all (invariance verified)"
    _emit(write_rows(rows, ProfileRow, [f"m={args.m} {note}"]), args.out)


def run_experiment(args):
    g = gen.build(args.m)
    params = ss.SourceParams(args.m, args.chi)
    record = ss.run_experiment(g, parse_theta(args.theta, args.m), params, args.trials, args.seed, args.workers)
    _emit(_json_text(record.to_json()), args.out)


def run_resources(args):
    rows = cmd_resources(_parse_range(args.n_range), args.chi)
    _emit(write_rows(rows, ResourceRow, [f"crossover_n={ss.crossover_n(args.chi)!r}"]), args.out)


def run_decompose(args):
    net = netw.build_network(gen.build(args.m), parse_theta(args.theta, args.m))
    _emit(_json_text(dec.decompose(net).to_json(target=net.D)), args.out)


def run_selftest(args):
    rows = selftest.run(seed=args.seed)
    lines = [f"{'PASS' if ok else 'FAIL'}  {mod}.{name}: {obs}" for mod, name, ok, obs in rows]
    failed = sum(not ok for _, _, ok, _ in rows)
    lines.append(f"{len(rows) - failed}/{len(rows)} checks passed")
    _emit("\n".join(lines) + "\n", args.out)
    return 2 if failed else 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="RNG seed")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="numerical tolerance")

    parser = _Parser(prog="mhd", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", parents=[common], help="write the generator Y_m as matrix JSON")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=run_gen)

    p = sub.add_parser("validate", parents=[common], help="check a matrix JSON file against the generator conditions")
    p.add_argument("--in", dest="input_path", required=True)
    p.set_defaults(func=run_validate)

    p = sub.add_parser("net", parents=[common], help="write D_m(theta) as matrix JSON")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--theta", required=True, help="radians, or 'dip'")
    p.set_defaults(func=run_net)

    p = sub.add_parser("stats", aliases=["profile"], parents=[common], help="coincidence/bunching profile as CSV")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--input", default=None, help="1-based input modes 'i,j'; omit to verify all inputs agree")
    p.add_argument("--theta-grid", default="0:dip:101", help="start:end:count, ends may be 'dip'")
    p.set_defaults(func=run_stats)

    p = sub.add_parser("experiment", parents=[common], help="seeded Monte Carlo run, record as JSON")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--theta", required=True, help="radians, or 'dip'")
    p.add_argument("--chi", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=run_experiment)

    p = sub.add_parser("resources", parents=[common], help="source success probabilities per architecture as CSV")
    p.add_argument("--n-range", default="2:12", help="lo:hi crystal counts, inclusive")
    p.add_argument("--chi", type=float, required=True)
    p.set_defaults(func=run_resources)

    p = sub.add_parser("decompose", parents=[common], help="two-level decomposition of D_m(theta) as JSON")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--theta", required=True, help="radians, or 'dip'")
    p.set_defaults(func=run_decompose)

    p = sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    p.set_defaults(func=run_selftest)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args) or 0
    except ConsistencyError as exc:
        print(f"mhd: internal error: {exc}", file=sys.stderr)
        return 2
    except (MHDError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"mhd: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
