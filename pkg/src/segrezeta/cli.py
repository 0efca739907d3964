"""Command line front end.

Problem files are JSON::

    {
      "name": "x2xy-p3",
      "factors": [3],
      "variables": [["x0", "x1", "x2", "x3"]],
      "generators": ["x0^2", "x0*x1"],
      "degrees": [[2], [2]]
    }

``variables`` defaults to x0..xn (and y0..ym for a second factor) and
``degrees`` to the degrees of the parsed generators. An optional ``expect``
object holds golden values used by ``selftest``.

Exit codes: 0 success or match, 1 verification mismatch or failed check,
2 input error, 3 genericity exhaustion.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .chowring import AmbientSpec, IntPoly, ZetaFunction, format_factored
from .errors import (
    GenericityExhaustedError,
    PolynomialParseError,
    RankConstraintError,
    SegreZetaError,
)
from .exactalg import DEFAULT_PRIME, QQ, PolyRing, multidegree_of
from .segre import (
    complete_intersection_segre,
    compute_segre,
    graph_closure,
    equigenerate,
    multidegree_class,
    segre_from_projective_degrees,
)
from .zeta import (
    ZetaProblem,
    check_properties,
    restrict_hyperplane,
    verify_cone,
    zeta_from_ideal,
)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_GENERICITY = 0, 1, 2, 3
_STEMS = ("x", "y", "z", "w")


class InputError(SegreZetaError):
    pass


@dataclass
class ProblemFile:
    factors: list
    variables: list
    generators: list
    degrees: list
    name: str = ""
    expect: dict = field(default_factory=dict)

    def ring(self):
        return PolyRing(self.variables, QQ)

    def polynomials(self):
        ring = self.ring()
        return [ring.parse(g) for g in self.generators]

    def problem(self):
        return ZetaProblem.from_generators(self.polynomials(), self.degrees)

    def to_json(self):
        out = {
            "factors": list(self.factors),
            "variables": [list(v) for v in self.variables],
            "generators": list(self.generators),
            "degrees": [list(d) for d in self.degrees],
        }
        if self.name:
            out["name"] = self.name
        if self.expect:
            out["expect"] = self.expect
        return out

    def dumps(self):
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def loads(cls, text, source="<string>"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}")
        if not isinstance(data, dict):
            raise InputError(f"{source}: top level must be an object")
        try:
            factors = [int(n) for n in data["factors"]]
            generators = [str(g) for g in data["generators"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{source}: missing or malformed field {exc}")
        variables = data.get("variables") or [
            [f"{_STEMS[k]}{i}" for i in range(n + 1)] for k, n in enumerate(factors)]
        if len(variables) != len(factors) or any(
                len(v) != n + 1 for v, n in zip(variables, factors)):
            raise InputError(f"{source}: variables do not match factors {factors}")
        ring = PolyRing(variables, QQ)
        polys = []
        for g in generators:
            try:
                polys.append(ring.parse(g))
            except PolynomialParseError as exc:
                exc.line, offset = _locate(text, g)
                if exc.column is not None:
                    exc.column += offset
                raise InputError(f"{source}: generator {g!r}: {exc}") from exc
        try:
            actual = [list(multidegree_of(f)) for f in polys]
        except SegreZetaError as exc:
            raise InputError(f"{source}: {exc}") from exc
        degrees = data.get("degrees")
        if degrees is None:
            degrees = actual
        degrees = [list(d) if isinstance(d, list) else [d] for d in degrees]
        if degrees != actual:
            raise InputError(f"{source}: declared degrees {degrees} differ from {actual}")
        return cls(factors, [list(v) for v in variables], generators, degrees,
                   data.get("name", ""), data.get("expect", {}))

    @classmethod
    def load(cls, path):
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}")
        return cls.loads(text, str(path))


def _locate(text, needle):
    """Line number and column offset of a JSON string literal in the file."""
    quoted = json.dumps(needle)
    for i, line in enumerate(text.splitlines(), 1):
        col = line.find(quoted)
        if col >= 0:
            return i, col + 1
    return None, 0


def corpus_files():
    root = resources.files("segrezeta") / "corpus"
    return sorted((p for p in root.iterdir() if p.name.endswith(".json")),
                  key=lambda p: p.name)


def _engine_kwargs(args):
    return {"seed": args.seed, "prime": args.prime, "retries": args.retries}


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2)


def _parse_target(text, nfactors):
    try:
        dims = [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"bad --target {text!r}")
    if len(dims) != nfactors:
        raise InputError(f"--target needs {nfactors} dimension(s), got {text!r}")
    return AmbientSpec(dims)


# -- commands -----------------------------------------------------------------

def cmd_segre(args, out):
    pf = ProblemFile.load(args.file)
    res = compute_segre(pf.polynomials(), **_engine_kwargs(args))
    if args.json:
        out.write(_dump(res.segre.to_json()) + "\n")
    else:
        out.write(f"{res.segre}\n")
    return EXIT_OK


def _zeta_summary(z):
    return f"P = {z.P}; Q = {format_factored(z.bundle, z.P.names)}"


def cmd_zeta(args, out):
    pf = ProblemFile.load(args.file)
    p = pf.problem()
    z = zeta_from_ideal(p, **_engine_kwargs(args))
    report = check_properties(z, p, **_engine_kwargs(args))
    if args.json:
        data = z.to_json()
        data["properties"] = report.to_json()
        out.write(_dump(data) + "\n")
    else:
        out.write(_zeta_summary(z) + "\n")
        for line in report.lines():
            out.write(f"  {line}\n")
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_properties(args, out):
    pf = ProblemFile.load(args.file)
    p = pf.problem()
    z = zeta_from_ideal(p, **_engine_kwargs(args))
    report = check_properties(z, p, **_engine_kwargs(args))
    if args.json:
        out.write(_dump(report.to_json()) + "\n")
    else:
        out.write(_zeta_summary(z) + "\n")
        for line in report.lines():
            out.write(line + "\n")
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_verify_cone(args, out):
    pf = ProblemFile.load(args.file)
    p = pf.problem()
    target = _parse_target(args.target, len(pf.factors))
    report = verify_cone(p, target, **_engine_kwargs(args))
    if args.json:
        out.write(_dump(report.to_json()) + "\n")
    else:
        out.write(f"target {target!r}: {report.verdict}\n")
        out.write(f"  predicted {report.predicted}\n")
        out.write(f"  computed  {report.computed}\n")
    return EXIT_OK if report.verdict == "match" else EXIT_MISMATCH


def cmd_restrict(args, out):
    pf = ProblemFile.load(args.file)
    p = pf.problem()
    kw = _engine_kwargs(args)
    before = zeta_from_ideal(p, **kw)
    rows = []
    for k in range(args.count):
        rng = random.Random(f"{args.seed}:restrict:{args.factor}:{k}")
        q = restrict_hyperplane(p, args.factor, rng)
        after = zeta_from_ideal(q, **kw)
        rows.append({
            "hyperplane": k,
            "ambient": list(q.base_ambient.factor_dims),
            "generators": [str(f) for f in q.generators],
            "zeta": after.to_json(),
            "unchanged": after == before,
        })
    ok = all(r["unchanged"] for r in rows)
    if args.json:
        out.write(_dump({"before": before.to_json(), "restrictions": rows,
                         "verdict": "match" if ok else "mismatch"}) + "\n")
    else:
        out.write(f"before: {_zeta_summary(before)}\n")
        for r in rows:
            z = ZetaFunction.from_json(r["zeta"])
            out.write(f"  hyperplane {r['hyperplane']}: {_zeta_summary(z)} "
                      f"[{'unchanged' if r['unchanged'] else 'CHANGED'}]\n")
    return EXIT_OK if ok else EXIT_MISMATCH


# -- selftest -----------------------------------------------------------------

def _selftest_cases(args):
    kw = _engine_kwargs(args)
    quick = args.quick
    for path in corpus_files():
        pf = ProblemFile.loads(path.read_text(), path.name)
        if quick and not pf.expect.get("quick", False):
            continue
        yield from _corpus_checks(pf, kw)
    yield from _ci_oracle_checks(kw, 3 if quick else 10)
    yield from _dual_checks(kw, quick)


def _corpus_checks(pf, kw):
    exp = pf.expect
    name = pf.name
    polys = pf.polynomials()
    if "segre" in exp:
        def run(polys=polys):
            got = str(compute_segre(polys, **kw).segre)
            return got == exp["segre"], got
        yield ("corpus", f"{name}: segre", run)
    if "zeta" in exp:
        def run_zeta():
            p = pf.problem()
            z = zeta_from_ideal(p, **kw)
            names = z.P.names
            ok = (z.P == IntPoly.parse(exp["zeta"]["P"], names)
                  and z.Q == IntPoly.parse(exp["zeta"]["Q"], names))
            props = check_properties(z, p, **kw)
            return ok and props.passed, f"{_zeta_summary(z)}; properties " \
                f"{'pass' if props.passed else 'FAIL'}"
        yield ("corpus", f"{name}: zeta", run_zeta)
    for target in exp.get("verify_targets", []):
        def run_cone(target=target):
            report = verify_cone(pf.problem(), AmbientSpec(target), **kw)
            return report.verdict == "match", f"{report.verdict}: {report.computed}"
        yield ("corpus", f"{name}: cone {target}", run_cone)
    if exp.get("restrict"):
        def run_restrict():
            p = pf.problem()
            before = zeta_from_ideal(p, **kw)
            for k in range(3):
                rng = random.Random(f"{kw['seed']}:restrict:{name}:{k}")
                after = zeta_from_ideal(restrict_hyperplane(p, 0, rng), **kw)
                if after != before:
                    return False, f"hyperplane {k}: {_zeta_summary(after)}"
            return True, "unchanged on 3 hyperplanes"
        yield ("corpus", f"{name}: restrict", run_restrict)


_CI_SHAPES = [
    ([2], [[1], [2]]), ([3], [[2], [2]]), ([3], [[1], [3]]), ([4], [[2], [3]]),
    ([4], [[1], [1], [2]]), ([2, 2], [[1, 0], [0, 1]]), ([2, 2], [[1, 1], [1, 1]]),
    ([1, 2], [[1, 1]]), ([1, 2], [[0, 1], [1, 2]]), ([2, 2], [[2, 1]]),
]


def ci_instances(seed, count, prime=DEFAULT_PRIME):
    """Random complete intersections: generic forms of the shapes above."""
    from .exactalg import GF, random_form
    out = []
    for k in range(count):
        dims, degs = _CI_SHAPES[k % len(_CI_SHAPES)]
        ring = PolyRing.projective(dims, GF(prime))
        rng = random.Random(f"{seed}:ci:{k}")
        forms = [random_form(ring, tuple(d), rng) for d in degs]
        out.append((dims, degs, forms))
    return out


def _ci_oracle_checks(kw, count):
    for dims, degs, forms in ci_instances(kw["seed"], count, kw["prime"]):
        def run(dims=dims, degs=degs, forms=forms):
            got = compute_segre(forms, **kw).segre
            want = complete_intersection_segre(degs, AmbientSpec(dims))
            return got == want, str(got)
        yield ("ci-oracle", f"P^{dims} degrees {degs}", run)


_DUAL = [
    ([2], ["x0^2", "x0*x1"]), ([3], ["x0^2", "x0*x1"]), ([2], ["x0", "x1"]),
    ([3], ["x0*x1", "x0*x2"]), ([3], ["x0*x2", "x0*x3", "x1*x2", "x1*x3"]),
    ([3], ["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"]), ([2], ["x0^3 + x1^3 + x2^3"]),
    ([3], ["x0", "x1^2"]), ([2], ["x0^2", "x0*x1", "x1^2"]), ([3], ["x0*x1*x2"]),
]


def dual_instances():
    out = []
    for dims, gens in _DUAL:
        ring = PolyRing.projective(dims, QQ)
        out.append((dims, gens, [ring.parse(g) for g in gens]))
    return out


def dual_check(polys, n, **kw):
    """Segre class by the E-series against the projective-degree formula.

    The projective degrees come from slicing the saturated graph ideal, a
    route independent of the one inside the Segre computation.
    """
    res = compute_segre(polys, **kw)
    forms, d = equigenerate(polys)
    G = graph_closure(forms)
    g = multidegree_class(G, 1, **kw).projective_degrees()
    other = segre_from_projective_degrees(g, d[0], n)
    return res.segre, other


def _dual_checks(kw, quick):
    items = dual_instances()
    if quick:
        items = items[:4]
    for dims, gens, polys in items:
        def run(dims=dims, polys=polys):
            a, b = dual_check(polys, dims[0], **kw)
            return a == b, f"{a} | {b}"
        yield ("dual", f"P^{dims[0]} ({', '.join(gens)})", run)


def cmd_selftest(args, out):
    failures = 0
    start = time.time()
    for suite, case, run in _selftest_cases(args):
        try:
            ok, detail = run()
        except SegreZetaError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        failures += not ok
        out.write(f"{'PASS' if ok else 'FAIL'}  {suite:10s} {case}  [{detail}]\n")
        out.flush()
    out.write(f"{'all passed' if not failures else f'{failures} failed'} "
              f"in {time.time() - start:.1f}s (seed {args.seed}, prime {args.prime})\n")
    return EXIT_OK if not failures else EXIT_MISMATCH


# -- entry point ----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    common.add_argument("--retries", type=int, default=5)
    common.add_argument("--json", action="store_true", help="emit JSON")

    parser = argparse.ArgumentParser(
        prog="segrezeta", description="Segre classes and Segre zeta functions")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, helptext in [
        ("segre", cmd_segre, "pushforward of the Segre class"),
        ("zeta", cmd_zeta, "Segre zeta function with property checks"),
        ("properties", cmd_properties, "structural checks of the zeta function"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("file")
        sp.set_defaults(func=func)
    sp = sub.add_parser("verify-cone", parents=[common],
                        help="compare zeta evaluated on a larger ambient with the cone")
    sp.add_argument("file")
    sp.add_argument("--target", required=True, help="N or N,M")
    sp.set_defaults(func=cmd_verify_cone)
    sp = sub.add_parser("restrict", parents=[common],
                        help="zeta before and after generic hyperplane restrictions")
    sp.add_argument("file")
    sp.add_argument("--factor", type=int, default=0)
    sp.add_argument("--count", type=int, default=3)
    sp.set_defaults(func=cmd_restrict)
    sp = sub.add_parser("selftest", parents=[common], help="run the bundled corpus")
    sp.add_argument("--quick", action="store_true")
    sp.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except GenericityExhaustedError as exc:
        sys.stderr.write(f"genericity exhausted: {exc}\n")
        for line in exc.log:
            sys.stderr.write(f"  {line}\n")
        return EXIT_GENERICITY
    except RankConstraintError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except SegreZetaError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())


def main_exit():
    sys.exit(main())
