"""Command-line front end.

Every subcommand reads a JSON model file (``--model``) and, where needed,
a final-state file (``--state``; a ``"state"`` object embedded in the model
file works too).  ``--format structured`` prints JSON lines: a schema
header, then records, then a ``result`` record.  Exact numbers are
``"p/q"`` strings; real numbers carry an ``error`` field.

Exit status: 0 success, 1 invariant violation or discrepancy, 2 bad
input, 3 cap or tolerance exceeded.
"""
import argparse
import itertools
import json
import math
import sys
from fractions import Fraction

from . import acceptance
from .audit import audit_instance
from .exact import det, fmt_fraction
from .ghost_formula import (build_ghost_matrix, coalescence_Z, extracted_det,
                            permutation, symbolic_Z)
from .ghostfree import (BrownianKernels, HeirBox, ProductBox, QuadratureError,
                        heir_box_probability, heir_mass, permuted_set_probability)
from .instances import final_sites, ghost_sets
from .oracle import (enumerate_castings, enumerate_performances,
                     interacting_distribution, interacting_distribution_with_ghosts,
                     interacting_dp, lgv_enumerate)
from .spacetime import (EXTENSIONS, CapExceeded, LatticeKernels, ModelError, build_model,
                        check_planarity)
from .specfile import SCHEMA, BrownianSpec, SpecFileError, load_model, load_state

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


class Violation(Exception):
    def __init__(self, check, **details):
        super().__init__(check)
        self.check = check
        self.details = details


def _num(v):
    if isinstance(v, Fraction) or isinstance(v, int):
        return fmt_fraction(v)
    return repr(float(v))


def _pi_str(pi):
    return " ".join(f"I{j + 1}->{f}" for j, f in enumerate(pi))


def _path_str(p):
    return " ".join(f"({x},{t})" for x, t in p)


class Out:
    """Collects records; renders them as human text or JSON lines."""

    def __init__(self, command, fmt, stream=None):
        self.command = command
        self.fmt = fmt
        self.stream = stream or sys.stdout
        self.records = []

    def record(self, kind, human=None, **fields):
        self.records.append((kind, human, fields))

    def emit(self):
        if self.fmt == "structured":
            self._line({"schema": SCHEMA, "command": self.command})
            for kind, _, fields in self.records:
                self._line(dict(fields, record=kind))
        else:
            for _, human, _ in self.records:
                if human is not None:
                    print(human, file=self.stream)

    def _line(self, obj):
        print(json.dumps(obj, sort_keys=True, separators=(",", ":")), file=self.stream)


def _load(args, need_state=True):
    if not args.model:
        raise SpecFileError("--model is required")
    model, embedded = load_model(args.model)
    sf = load_state(args.state) if args.state else embedded
    if need_state and sf is None:
        raise SpecFileError("a final state is required (--state or an embedded \"state\")")
    return model, sf


def _discrete(model):
    if isinstance(model, BrownianSpec):
        raise SpecFileError("this subcommand needs a discrete model")
    if not model.sources:
        raise SpecFileError(f"{model.kind}: field sources: starting points are required")
    return build_model(model), tuple(model.sources)


def _check_n(sf, xs):
    if sf.state.n != len(xs):
        raise SpecFileError(f"state has n={sf.state.n} but the model lists {len(xs)} sources")


def _placed(sf):
    if not sf.state.fully_placed:
        raise SpecFileError("positions are required for every role")
    return sf.state


def cmd_prob(args, out):
    model, sf = _load(args)
    G, xs = _discrete(model)
    _check_n(sf, xs)
    s = _placed(sf)
    z, parts = coalescence_Z(xs, s, G, detail=True)
    out.record("state", f"final state: {s!r}", n=s.n, ghosts=sorted(s.ghosts),
               sign=s.sign)
    for pi, c in parts:
        out.record("candidate", f"candidate {_pi_str(pi)}  contribution {fmt_fraction(c)}",
                   bijection=[str(f) for f in pi], ranks=list(permutation(pi)),
                   contribution=fmt_fraction(c))
    out.record("result", f"Z = {fmt_fraction(z)}", Z=fmt_fraction(z), candidates=len(parts))


def cmd_symbolic(args, out):
    model, sf = _load(args)
    G, xs = _discrete(model)
    _check_n(sf, xs)
    s = _placed(sf)
    M = build_ghost_matrix(xs, s, G)
    sym = symbolic_Z(M, s.signs)
    sub = extracted_det(M, s.signs)
    z = coalescence_Z(xs, s, G)
    out.record("matrix", str(M), rows=[[str(e) for e in row] for row in M.entries])
    out.record("result", f"symbolic = {fmt_fraction(sym)}\nsubstituted = {fmt_fraction(sub)}\n"
               f"candidates = {fmt_fraction(z)}",
               symbolic=fmt_fraction(sym), substituted=fmt_fraction(sub), candidates=fmt_fraction(z))
    if not sym == sub == z:
        raise Violation("symbolic-equals-candidates", symbolic=fmt_fraction(sym),
                        substituted=fmt_fraction(sub), candidates=fmt_fraction(z))


def _kernels(model):
    if isinstance(model, BrownianSpec):
        return BrownianKernels(model.T), model.sources
    G, xs = _discrete(model)
    return LatticeKernels(G), xs


def _box_result(out, value, err, discrete, label):
    if discrete:
        out.record("result", f"{label} = {fmt_fraction(value)}", value=fmt_fraction(value))
    else:
        out.record("result", f"{label} = {value:.12g} (error <= {err:.2g})",
                   value=_num(value), error=_num(err))


def cmd_ghost_free(args, out):
    model, sf = _load(args)
    _ghost_free(model, sf, args, out)


def _ghost_free(model, sf, args, out):
    K, xs = _kernels(model)
    _check_n(sf, xs)
    s = sf.state
    discrete = not isinstance(model, BrownianSpec)
    if sf.heir_box is not None:
        box = HeirBox(sf.heir_box, ordered=sf.heir_box_ordered)
        value, err = heir_box_probability(xs, s.ghosts, box, K, args.tol, full_output=True)
        _box_result(out, value, err, discrete, "P")
        return
    if sf.heir_positions is not None:
        ys = sf.heir_positions
    elif all(h in s.positions for h in s.heirs):
        ys = tuple(s.positions[h] for h in s.heirs)
    else:
        raise SpecFileError("ghost-free needs heir positions or a heir_box")
    value = heir_mass(xs, s.ghosts, ys, K)
    if discrete:
        out.record("result", f"heir mass = {fmt_fraction(value)}", value=fmt_fraction(value))
    else:
        err = _det_error(xs, s.ghosts, ys, K, value)
        out.record("result", f"heir density = {value:.15g} (error <= {err:.2g})",
                   value=_num(value), error=_num(err))


def _det_error(xs, ghosts, ys, K, value):
    from .ghostfree import build_coalescence_matrix
    rows = build_coalescence_matrix(xs, ghosts, ys, K).entries
    n = len(rows)
    # Leibniz bound: each term carries ~n roundings
    bound = sum(math.prod(abs(rows[i][p[i]]) for i in range(n))
                for p in itertools.permutations(range(n))) if n <= 8 else float("nan")
    return 4 * n * sys.float_info.epsilon * bound


def cmd_permuted_set(args, out):
    model, sf = _load(args)
    G, xs = _discrete(model)
    _check_n(sf, xs)
    if sf.box is None:
        raise SpecFileError("permuted-set needs a \"box\" in the state file")
    if not sf.signs_given:
        raise SpecFileError("permuted-set needs a sign or position for every ghost")
    s = sf.state
    box = ProductBox(sf.box)
    K = LatticeKernels(G)
    value = permuted_set_probability(xs, box, s, K)
    truth = Fraction(0)
    for (gs, pos), p in interacting_distribution_with_ghosts(G, xs).items():
        if gs == s.ghosts and all(lo <= y <= hi for y, (lo, hi) in zip(pos, box.intervals)):
            truth += p
    out.record("result", f"permuted-set sum = {fmt_fraction(value)}\n"
               f"interacting probability = {fmt_fraction(truth)}",
               value=fmt_fraction(value), interacting=fmt_fraction(truth))
    if value != truth:
        raise Violation("permuted-set-identity", value=fmt_fraction(value),
                        interacting=fmt_fraction(truth))


def cmd_oracle(args, out):
    model, sf = _load(args, need_state=args.mode != "dp-all")
    G, xs = _discrete(model)
    cap = args.cap
    if args.mode == "perf":
        _check_n(sf, xs)
        rep = enumerate_performances(xs, _placed(sf), G, cap)
        for p, w in rep.items:
            gp = "; ".join(f"ghost {g}: {_path_str(path)}" for g, path in p.ghost_paths)
            col = ", ".join(f"{g}@({v[0]},{v[1]})" for g, v in p.collisions)
            out.record("performance", f"collisions {col or 'none'}  {gp}  weight {fmt_fraction(w)}",
                       collisions=[[g, list(v)] for g, v in p.collisions],
                       ghost_paths=[[g, [list(v) for v in path]] for g, path in p.ghost_paths],
                       edges=sorted([list(u), list(v)] for u, v in p.edges),
                       weight=fmt_fraction(w))
        out.record("result", f"{rep.count} performances, total = {fmt_fraction(rep.total)}",
                   count=rep.count, total=fmt_fraction(rep.total), description=rep.description)
    elif args.mode == "dp":
        _check_n(sf, xs)
        dist = interacting_dp(G, xs, sf.state.ghosts)
        for ys in sorted(dist):
            out.record("mass", f"heirs at {list(ys)}: {fmt_fraction(dist[ys])}",
                       heirs=list(ys), p=fmt_fraction(dist[ys]))
        total = sum(dist.values(), Fraction(0))
        out.record("result", f"total = {fmt_fraction(total)}", total=fmt_fraction(total),
                   ghosts=sorted(sf.state.ghosts))
    elif args.mode == "castings":
        _check_n(sf, xs)
        cs = enumerate_castings(xs, _placed(sf), G, cap)
        total = Fraction(0)
        for c in cs:
            w = c.weight(G)
            total += c.sign * w
            out.record("casting", f"{_pi_str(c.pi)}  sign {c.sign:+d}  weight {fmt_fraction(w)}",
                       bijection=[str(f) for f in c.pi], sign=c.sign, weight=fmt_fraction(w),
                       paths=[[list(v) for v in p] for p in c.paths])
        out.record("result", f"{len(cs)} castings, signed total = {fmt_fraction(total)}",
                   count=len(cs), signed_total=fmt_fraction(total))
    elif args.mode == "lgv":
        _check_n(sf, xs)
        s = sf.state
        if s.ghosts:
            raise SpecFileError("lgv mode needs a state without ghosts")
        ys = _placed(sf).position_tuple()
        rep = lgv_enumerate(xs, ys, G, cap)
        from .ghost_formula import weight_matrix
        d = det(weight_matrix(xs, s, G))
        out.record("result", f"{rep.count} disjoint tuples, total = {fmt_fraction(rep.total)}\n"
                   f"determinant = {fmt_fraction(d)}",
                   count=rep.count, total=fmt_fraction(rep.total), determinant=fmt_fraction(d))
        if d != rep.total:
            raise Violation("lgv", total=fmt_fraction(rep.total), determinant=fmt_fraction(d))


def cmd_audit(args, out):
    model, sf = _load(args)
    G, xs = _discrete(model)
    _check_n(sf, xs)
    s = _placed(sf)
    from .ghost_formula import candidate_bijections
    cands = candidate_bijections(s)
    rep = audit_instance(xs, s, G, args.extension, args.cap)
    for pi in cands:
        out.record("candidate", f"candidate {_pi_str(pi)}", bijection=[str(f) for f in pi])
    sign_ok = not any(v[0] == "sign-identity" for v in rep.violations)
    out.record("result",
               f"candidates: {len(cands)}\ncastings: {rep.castings}\nfixed points: {rep.fixed_points}\n"
               f"paired: {rep.paired}\nperformances: {rep.performances}\n"
               f"signed casting sum = {fmt_fraction(rep.signed_casting_sum)}\n"
               f"Z = {fmt_fraction(rep.Z)}\n"
               f"sign identity: {'holds' if sign_ok else 'FAILS'}\n"
               f"violations: {len(rep.violations)}",
               candidates=len(cands), castings=rep.castings, fixed_points=rep.fixed_points,
               paired=rep.paired, performances=rep.performances,
               signed_casting_sum=fmt_fraction(rep.signed_casting_sum), Z=fmt_fraction(rep.Z),
               sign_identity=sign_ok, violations=len(rep.violations))
    if rep.violations:
        check, witness = rep.violations[0]
        raise Violation(check, witness=repr(witness))


def cmd_planarity(args, out):
    model, sf = _load(args, need_state=False)
    G, xs = _discrete(model)
    targets = sorted(set(sf.state.positions.values())) if sf and sf.state.positions \
        else final_sites(xs, G)
    rep = check_planarity(G, xs, targets, args.cap, args.extension)
    out.record("result", f"P1 crossing: {'holds' if rep.p1 else 'FAILS'}\n"
               f"P2 consecutive collision: {'holds' if rep.p2 else 'FAILS'}\n"
               f"checked {rep.checked_pairs} path pairs, {rep.checked_triples} triples",
               p1=rep.p1, p2=rep.p2, checked_pairs=rep.checked_pairs,
               checked_triples=rep.checked_triples)
    if not rep.planar:
        if not rep.p1:
            raise Violation("P1", paths=[_path_str(p) for p in rep.p1_counterexample])
        p, q, r, v = rep.p2_counterexample
        raise Violation("P2", paths=[_path_str(x) for x in (p, q, r)], vertex=list(v))


def cmd_brownian(args, out):
    model, sf = _load(args)
    if not isinstance(model, BrownianSpec):
        raise SpecFileError("brownian subcommands need a model with kind \"brownian\"")
    if args.mode == "density":
        sf = type(sf)(sf.state, heir_positions=sf.heir_positions)
    elif sf.heir_box is None:
        raise SpecFileError("brownian box needs a heir_box")
    _ghost_free(model, sf, args, out)


def cmd_normalize_check(args, out):
    model, _ = _load(args, need_state=False)
    if isinstance(model, BrownianSpec):
        K, xs = BrownianKernels(model.T), model.sources
        total = err = 0.0
        line = (-math.inf, math.inf)
        for gs in ghost_sets(len(xs)):
            k = len(xs) - len(gs)
            v, e = heir_box_probability(xs, gs, HeirBox((line,) * k, ordered=True), K,
                                        args.tol, full_output=True)
            total += v
            err += e
        out.record("result", f"total = {total:.12g} (error <= {err:.2g})",
                   total=_num(total), error=_num(err))
        if abs(total - 1) > max(err, args.tol) * 10:
            raise Violation("normalization", total=_num(total))
        return
    G, xs = _discrete(model)
    dist = interacting_distribution(G, xs)
    K = LatticeKernels(G)
    sites = final_sites(xs, G)
    total = Fraction(0)
    for gs in ghost_sets(len(xs)):
        sub = Fraction(0)
        for ys in itertools.combinations(sites, len(xs) - len(gs)):
            m = heir_mass(xs, gs, ys, K)
            if m != dist.get((gs, ys), 0):
                raise Violation("heir-mass-equals-dynamics", ghosts=sorted(gs), heirs=list(ys),
                                heir_mass=fmt_fraction(m),
                                dynamics=fmt_fraction(dist.get((gs, ys), 0)))
            sub += m
        out.record("pattern", f"ghosts {sorted(gs)}: {fmt_fraction(sub)}",
                   ghosts=sorted(gs), mass=fmt_fraction(sub))
        total += sub
    out.record("result", f"total = {fmt_fraction(total)}", total=fmt_fraction(total))
    if total != 1:
        raise Violation("normalization", total=fmt_fraction(total))


def cmd_density_grid(args, out):
    model, sf = _load(args)
    K, xs = _kernels(model)
    _check_n(sf, xs)
    gs = sf.state.ghosts
    k = len(xs) - len(gs)
    if isinstance(model, BrownianSpec):
        lo, hi, step = args.grid
        m = int(round((hi - lo) / step))
        axis = [lo + i * step for i in range(m + 1)]
    else:
        G, _ = _discrete(model)
        axis = final_sites(xs, G)
    w = out.stream
    print(",".join([f"y{i + 1}" for i in range(k)] + ["density"]), file=w)
    for ys in itertools.product(axis, repeat=k):
        if any(a >= b for a, b in zip(ys, ys[1:])):
            continue
        v = heir_mass(xs, gs, ys, K)
        cells = [repr(y) if isinstance(y, float) else str(y) for y in ys]
        print(",".join(cells + [_num(v)]), file=w)
    out.fmt = "csv"


def cmd_accept(args, out):
    results = []
    for fn in acceptance.CRITERIA:
        r = fn()
        results.append(r)
        out.record("criterion", r.line(), number=r.number, title=r.title, passed=r.passed,
                   detail=r.detail)
    failed = [r.number for r in results if not r.passed]
    out.record("result", f"{len(results) - len(failed)}/{len(results)} criteria passed",
               passed=len(results) - len(failed), failed=failed)
    if failed:
        raise Violation("acceptance", failed=failed)


def _parse_grid(text):
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected lo:hi:step") from None
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError("need lo <= hi and step > 0")
    return lo, hi, step


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="model file (JSON)")
    common.add_argument("--state", help="final-state file (JSON)")
    common.add_argument("--format", choices=("human", "structured"), default="human")
    common.add_argument("--cap", type=int, default=10**6, help="enumeration cap")
    common.add_argument("--tol", type=float, default=1e-8, help="quadrature tolerance")
    common.add_argument("--extension", choices=EXTENSIONS, default="time-space",
                        help="linear order deciding which crossing comes first")
    common.add_argument("--seed", type=int, default=None,
                        help="reserved; nothing here is random")

    p = argparse.ArgumentParser(prog="ghostcoal", description="Exact coalescing-walk probabilities.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, help_ in [
        ("prob", cmd_prob, "Z by candidate enumeration"),
        ("symbolic", cmd_symbolic, "Z by symbolic determinant expansion"),
        ("ghost-free", cmd_ghost_free, "heir mass / density or box probability"),
        ("permuted-set", cmd_permuted_set, "permuted-set sum vs interacting probability"),
        ("audit", cmd_audit, "involution audit on one final state"),
        ("planarity", cmd_planarity, "check crossing and consecutive-collision properties"),
        ("normalize-check", cmd_normalize_check, "total probability over all patterns"),
        ("accept", cmd_accept, "run the acceptance suite"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
    sp = sub.add_parser("oracle", parents=[common], help="brute-force oracles")
    sp.add_argument("mode", choices=("perf", "dp", "castings", "lgv"))
    sp.set_defaults(func=cmd_oracle)
    sp = sub.add_parser("brownian", parents=[common], help="Brownian heir density or box")
    sp.add_argument("mode", choices=("density", "box"))
    sp.set_defaults(func=cmd_brownian)
    sp = sub.add_parser("density-grid", parents=[common], help="CSV of heir densities")
    sp.add_argument("--grid", type=_parse_grid, default=(-3.0, 3.0, 0.5),
                    help="lo:hi:step axis for Brownian models")
    sp.set_defaults(func=cmd_density_grid)
    return p


def main(argv=None, stream=None):
    args = build_parser().parse_args(argv)
    out = Out(args.command, args.format, stream)
    status = EXIT_OK
    try:
        args.func(args, out)
    except Violation as v:
        out.record("discrepancy", f"discrepancy: {v.check} {v.details}", check=v.check,
                   **{k: val for k, val in v.details.items()})
        status = EXIT_VIOLATION
    except (SpecFileError, ModelError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (CapExceeded, QuadratureError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_LIMIT
    if out.fmt != "csv":
        out.emit()
    return status


if __name__ == "__main__":
    sys.exit(main())
