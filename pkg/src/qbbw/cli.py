"""
Command-line harness.

    qbbw build     --m M --n N --lambda "a1,..|b1,.." --route R   irreducible module artifact
    qbbw export    ... --route R                                   full operator dump of a realization
    qbbw verify    --suite S ...  |  verify --artifact FILE        identity checks
    qbbw compare   A.json B.json  |  compare --route-a R --route-b R' ...
    qbbw character ... --route R                                   weight multiplicities

Routes: classical ``kac``, ``direct``, ``projective``, ``grassmann``;
quantum ``qkac``, ``qdirect``, ``patch`` (needs --c, --k), ``bbw``.

Exit status: 0 success, 1 compare found differences, 2 rejected input,
3 a checked identity or invariant failed.  Artifacts are UTF-8 JSON with
sorted keys.  The rewrite step cap is read from QBBW_REWRITE_STEPS.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import glmn, uq, qvcs, vcs_classical
from .glmn import AlgebraSpec, NonDominantError, character_json, format_weight, parse_weight
from .qfield import QScalar, PoleError, eval_at, parse_qscalar
from .superalg import SuperOperator

CLASSICAL_ROUTES = ("kac", "direct", "projective", "grassmann")
QUANTUM_ROUTES = ("qkac", "qdirect", "patch", "bbw")
ROUTES = CLASSICAL_ROUTES + QUANTUM_ROUTES
SUITES = ("classical-relations", "quantum-relations", "jacobi", "root-vectors", "adjoint",
          "pairing", "commutant", "factorization", "auxiliary", "intertwining", "realization")

EXIT_OK, EXIT_DIFF, EXIT_INPUT, EXIT_FAIL = 0, 1, 2, 3


class InputError(ValueError):
    """Rejected command-line input (exit status 2)."""


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def _spec(args):
    if args.m is None or args.n is None:
        raise InputError("--m and --n are required")
    if args.m < 1 or args.n < 1:
        raise InputError("need m >= 1 and n >= 1")
    return AlgebraSpec(args.m, args.n)


def _weight(args, spec):
    if args.weight is None:
        raise InputError("--lambda is required for this route")
    try:
        lam = parse_weight(args.weight, spec.m, spec.n)
    except ValueError as e:
        raise InputError(str(e))
    glmn.check_dominant(spec, lam)
    return lam


def _q_point(text):
    if text is None:
        return None
    try:
        q0 = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError("--eval-q expects a rational p/r, got %r" % text)
    if q0 == 0:
        raise InputError("--eval-q must be nonzero")
    return q0


# ---------------------------------------------------------------------------
# building
# ---------------------------------------------------------------------------

def build_realization(args, spec):
    """The realization object of a realization route (None for module routes)."""
    route = args.route
    conv = args.convention
    if route == "patch":
        if args.k is None:
            raise InputError("route patch needs --k")
        if args.k < 0:
            raise InputError("--k must be nonnegative")
        return qvcs.realize_patch(spec, args.c or 0, args.k, convention=conv)
    lam = _weight(args, spec)
    if route == "projective":
        return vcs_classical.realize_projective(spec, lam, L=args.L, convention=conv)
    if route == "grassmann":
        return vcs_classical.realize_grassmann(spec, lam, convention=conv)
    if route == "bbw":
        return qvcs.realize_bbw(spec, lam, L=args.L, convention=conv)
    return None


def build_module(args, spec):
    """(module, realization or None) for the configured route."""
    route = args.route
    if route not in ROUTES:
        raise InputError("unknown route %r; choose from %s" % (route, ", ".join(ROUTES)))
    if route == "kac":
        lam = _weight(args, spec)
        return glmn.irreducible_quotient(glmn.build_kac_module(spec, lam)), None
    if route == "direct":
        return glmn.build_irrep_direct(spec, _weight(args, spec)), None
    if route == "qkac":
        return uq.build_uq_irrep(spec, _weight(args, spec), route="kac"), None
    if route == "qdirect":
        return uq.build_uq_irrep(spec, _weight(args, spec), route="direct"), None
    R = build_realization(args, spec)
    return R.closure_module(), R


def _coeff(x, q0):
    if q0 is not None:
        return str(eval_at(x, q0))
    if isinstance(x, QScalar):
        return x.to_str()
    return str(x)


def module_artifact(M, route, quantum, q0=None, extra=None):
    d = M.to_json()
    d["action"] = {"e[%d,%d]" % ab: [[i, j, _coeff(x, q0)] for i, j, x in M.action[ab].triplets()]
                   for ab in sorted(M.action)}
    d["route"] = route
    d["quantum"] = quantum
    d["q"] = None if q0 is None else str(q0)
    d["parity_of_action"] = {"e[%d,%d]" % ab: M.action[ab].parity or 0 for ab in sorted(M.action)}
    if extra:
        d.update(extra)
    return d


def realization_dump(R, route, q0=None):
    """Full ambient operators of a realization, in the module schema."""
    spec = R.spec
    quantum = route in QUANTUM_ROUTES
    if quantum:
        ops = R.ops()
        weights = [R.weight(k) for k in range(R.dim)]
    else:
        ops = dict(R.ops)
        weights = [R.weight(k) for k in range(R.dim)]
    labels = [R.label(k) if quantum else R.tspace.label(k) for k in range(R.dim)]
    parities = [R.parity(k) if quantum else R.tspace.parity(k) for k in range(R.dim)]
    lam = R.lam if R.lam is not None else weights[R.hw]
    cls = uq.QWeightModule if quantum else glmn.WeightModule
    M = cls(spec, lam, weights, parities, ops, labels, hw=R.hw, kind="%s-ambient" % route)
    extra = {"truncation": R.L, "convention": R.convention, "ambient": True,
             "exact_columns": R.exact_columns(2)}
    if route == "patch":
        extra["c"] = R.params["c"]
        extra["k"] = R.params["k"]
    return module_artifact(M, route, quantum, q0, extra)


def _write(obj, path):
    text = json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# artifacts
# ---------------------------------------------------------------------------

def _parse_exact(text):
    """Coefficient of an exact quantum artifact: a QScalar string or a plain rational."""
    try:
        return parse_qscalar(text)
    except ValueError:
        return QScalar.from_fraction(Fraction(text))


def load_artifact(path):
    """Rebuild a (Q)WeightModule from an artifact; returns (module, meta)."""
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError("cannot read artifact %s: %s" % (path, e))
    try:
        spec = AlgebraSpec(int(d["algebra"]["m"]), int(d["algebra"]["n"]))
        quantum = bool(d.get("quantum"))
        q0 = Fraction(d["q"]) if d.get("q") else None
        exact_q = quantum and q0 is None
        lam = tuple(glmn._num(Fraction(x)) for x in d["lambda"])
        weights = [tuple(glmn._num(Fraction(x)) for x in w) for w in d["weights"]]
        dim = len(weights)
        action = {}
        for key, trip in d["action"].items():
            a, b = (int(t) for t in key[2:-1].split(","))
            cols = {}
            for i, j, x in trip:
                v = _parse_exact(x) if exact_q else glmn._num(Fraction(x))
                cols.setdefault(j, {})[i] = v
            par = d.get("parity_of_action", {}).get(key)
            if par is None:
                par = spec.pair_parity(a, b)
            action[(a, b)] = SuperOperator(dim, dim, cols, par)
        cls = uq.QWeightModule if quantum else glmn.WeightModule
        hw = d.get("hw", 0)
        M = cls(spec, lam, weights, d["parities"], action, d.get("basis"), hw=hw, kind=d.get("kind"))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError("malformed artifact %s: %s" % (path, e))
    return M, {"quantum": quantum, "q": q0, "route": d.get("route"), "raw": d,
               "columns": d.get("exact_columns")}


def _vanishes(op, q0):
    if q0 is None:
        return op.is_zero()
    return all(eval_at(x, q0) == 0 for _, _, x in op.triplets())


def artifact_relations(M, meta):
    """Identity results for the relations of the artifact's algebra."""
    spec = M.spec
    out = []
    if not meta["quantum"]:
        viol = {v["identity"]: v["diff"] for v in
                vcs_classical.relation_violations(spec, M.action, meta.get("columns"))}
        for x in sorted(M.action):
            for y in sorted(M.action):
                name = "[e%d%d,e%d%d}" % (x + y)
                out.append(_entry(name, name not in viol, viol.get(name)))
        return out
    q0 = meta["q"]
    cols = meta.get("columns")
    for name, r in uq.defining_relations(spec):
        if any(not M.has_letter(x) for w in r.terms for x in w):
            continue
        op = uq.evaluate(r, M)
        if cols is not None:
            op = op.restrict_columns(cols)
        out.append(_entry(name, _vanishes(op, q0), None if _vanishes(op, q0) else _witness(op)))
    return out


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def _entry(name, ok, witness=None):
    e = {"identity": name, "status": "pass" if ok else "fail"}
    if witness is not None:
        e["witness"] = witness
    return e


def _witness(op, limit=4):
    return [[i, j, _coeff(x, None)] for i, j, x in op.triplets()[:limit]]


def run_suite(args, spec):
    suite = args.suite
    conv = args.convention
    if suite == "jacobi":
        bad = set(glmn.super_jacobi_violations(spec))
        return [_entry("super-Jacobi", not bad, sorted(bad)[:4] if bad else None)]
    if suite == "classical-relations":
        if args.route in QUANTUM_ROUTES:
            raise InputError("classical-relations needs a classical route")
        M, R = build_module(args, spec)
        if R is None:
            bad = set(glmn.bracket_violations(M))
            return [_entry("[e%d%d,e%d%d}" % (x + y), x + y not in bad)
                    for x in sorted(M.action) for y in sorted(M.action)]
        viol = {v["identity"]: v for v in vcs_classical.relation_violations(spec, R.ops, R.exact_columns(2))}
        return [_entry("[e%d%d,e%d%d}" % (x + y), "[e%d%d,e%d%d}" % (x + y) not in viol,
                       viol.get("[e%d%d,e%d%d}" % (x + y), {}).get("diff"))
                for x in sorted(R.ops) for y in sorted(R.ops)]
    if suite == "quantum-relations":
        if args.route not in QUANTUM_ROUTES:
            raise InputError("quantum-relations needs a quantum route")
        if args.route in ("qkac", "qdirect"):
            M, _ = build_module(args, spec)
            bad = set(uq.relation_violations(M))
            return [_entry(name, name not in bad) for name, _ in uq.defining_relations(spec)]
        R = build_realization(args, spec)
        cols = R.exact_columns(2)
        out = []
        for name, r in uq.defining_relations(spec):
            if any(not R.has_letter(x) for w in r.terms for x in w):
                continue
            op = uq.evaluate(r, R)
            if cols is not None:
                op = op.restrict_columns(cols)
            out.append(_entry(name, op.is_zero(), None if op.is_zero() else _witness(op)))
        if args.route == "patch":
            val = qvcs.central_eigenvalue(R)
            want = uq.qpow((spec.m - spec.n) * (args.c or 0) - args.k)
            out.append(_entry("central eigenvalue q^((m-n)c-k)", val == want,
                              None if val == want else (val.to_str() if val is not None else "not scalar")))
        return out
    if suite in ("root-vectors", "adjoint"):
        ids = uq.lemma_identities(spec, conv) if suite == "root-vectors" else uq.adjoint_identities(spec, conv)
        mods = uq.default_modules(spec)
        rep = uq.verify_identities(spec, ids, mods, rewrite=(suite == "root-vectors"),
                                   strategies=("leftmost", "rightmost"))
        out = []
        for e in rep:
            ent = _entry(e["identity"], e["ok"])
            ent["routes"] = {k: e[k] for k in ("normal_form", "rewrite", "modules") if k in e}
            if not e["agree"]:
                ent["status"] = "fail"
                ent["witness"] = "routes disagree"
            out.append(ent)
        return out
    if suite == "pairing":
        bad = uq.pairing_violations(spec, "printed" if conv == "printed" else "graded")
        return [_entry("pairing", not bad, [list(b) for b in bad[:4]] if bad else None)]
    lam = _weight(args, spec)
    V = uq.build_uq_irrep(spec, lam)
    if suite == "commutant":
        bad = set(qvcs.commutant_violations(spec, V, convention=conv))
        return [_entry("[Delta'(%s), O]" % name, name not in bad) for name, _ in uq.levi_generators(spec)]
    if suite == "factorization":
        rep = qvcs.q_exp_factorization(spec, V, convention=conv)
        return [_entry("exp_q(O) = prod exp_q(O_a)", not rep["factorization"], rep["factorization"][:4] or None),
                _entry("binomial expansion", not rep["binomial"], rep["binomial"][:4] or None),
                _entry("O' q-commutation", rep["q_commutation"]),
                _entry("O nilpotent", rep["nilpotent"])]
    if suite == "auxiliary":
        rep = qvcs.auxiliary_identities(spec, V, convention=conv)
        return [_entry(k, v) for k, v in sorted(rep.items())]
    if suite == "intertwining":
        Vk = uq.build_uq_irrep(spec, lam, route="kac")
        V0 = qvcs.level_zero_qmodule(Vk)
        L = qvcs.max_level(Vk) + 1
        R = qvcs.realize_bbw(spec, lam, L=L, V0=V0, convention=conv)
        xi = qvcs.CoherentStateMap(spec, Vk, L, V0, convention=conv)
        bad = {x for x, _ in qvcs.intertwining_violations(R, xi)}
        from .linalg import rank
        r = rank([xi({k: 1}) for k in range(Vk.dim)])
        letters = [("E", a) for a in range(1, spec.size)] + [("F", a) for a in range(1, spec.size)]
        out = [_entry("pi(%s%d) Xi = Xi %s%d" % (x[0], x[1], x[0], x[1]), x not in bad) for x in letters]
        out.append(_entry("rank Xi = dim V", r == Vk.dim, None if r == Vk.dim else [r, Vk.dim]))
        return out
    if suite == "realization":
        args.route = args.route or "bbw"
        if args.route not in ("bbw", "projective", "grassmann"):
            raise InputError("suite realization needs route bbw, projective or grassmann")
        R = build_realization(args, spec)
        rep = (qvcs.verify_qrealization(R) if args.route == "bbw" else vcs_classical.verify_realization(R))
        out = [_entry(v if isinstance(v, str) else v["identity"], False) for v in rep["violations"]]
        out.append(_entry("closure dimension = oracle", rep["closure_dim"] == rep["oracle_dim"],
                          None if rep["closure_dim"] == rep["oracle_dim"] else [rep["closure_dim"], rep["oracle_dim"]]))
        out.append(_entry("closure character = oracle", rep["character_equal"]))
        out.append(_entry("highest weight", rep["highest_weight_ok"]))
        return out
    raise InputError("unknown suite %r; choose from %s" % (suite, ", ".join(SUITES)))


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------

def _summary(M):
    return {"algebra": [M.spec.m, M.spec.n], "lambda": [str(x) for x in M.lam], "dim": M.dim,
            "character": character_json(M), "irreducible": glmn.irreducibility_witness(M)}


def compare_modules(A, B):
    sa, sb = _summary(A), _summary(B)
    if sa["algebra"] != sb["algebra"]:
        raise InputError("arity mismatch: gl(%d|%d) vs gl(%d|%d)" % tuple(sa["algebra"] + sb["algebra"]))
    diff = {}
    for key in ("lambda", "dim", "character"):
        if sa[key] != sb[key]:
            diff[key] = {"a": sa[key], "b": sb[key]}
    for tag, s in (("a", sa), ("b", sb)):
        if not s["irreducible"]:
            diff.setdefault("irreducible", {})[tag] = False
    return {"a": sa, "b": sb, "diff": diff, "isomorphism_evidence": not diff}


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _common(p):
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--lambda", dest="weight", help='highest weight "a1,..,am|b1,..,bn"')
    p.add_argument("--route", default=None, help="one of: " + ", ".join(ROUTES))
    p.add_argument("--c", type=int, default=0, help="patch module parameter c")
    p.add_argument("--k", type=int, default=None, help="patch module degree k")
    p.add_argument("--L", type=int, default=None, help="fixed truncation degree (default: adaptive)")
    p.add_argument("--convention", choices=("corrected", "printed"), default="corrected")
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--eval-q", dest="eval_q", default=None,
                   help="write coefficients evaluated at this rational q (p/r)")


def make_parser():
    p = argparse.ArgumentParser(prog="qbbw", description=__doc__.split("\n\n")[0].strip())
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("build", "export", "character"):
        _common(sub.add_parser(name))
    v = sub.add_parser("verify")
    _common(v)
    v.add_argument("--suite", default=None, help="one of: " + ", ".join(SUITES))
    v.add_argument("--artifact", default=None, help="check the relations of an artifact file")
    c = sub.add_parser("compare")
    _common(c)
    c.add_argument("artifacts", nargs="*")
    c.add_argument("--route-a", default=None)
    c.add_argument("--route-b", default=None)
    return p


def _default_route(args, quantum_default="qkac"):
    if args.route is None:
        args.route = quantum_default


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (InputError, NonDominantError) as e:
        sys.stderr.write("qbbw: error: %s\n" % e)
        return EXIT_INPUT
    except (uq.RewriteLimitError, uq.PBWError, PoleError) as e:
        sys.stderr.write("qbbw: invariant failure: %s\n" % e)
        return EXIT_FAIL


def _dispatch(args):
    q0 = _q_point(getattr(args, "eval_q", None))
    cmd = args.command
    if cmd == "verify" and args.artifact:
        M, meta = load_artifact(args.artifact)
        results = artifact_relations(M, meta)
        return _report({"artifact": args.artifact, "route": meta["route"]}, results, args.output)
    if cmd == "compare" and args.artifacts:
        if len(args.artifacts) != 2:
            raise InputError("compare takes exactly two artifacts")
        A, _ = load_artifact(args.artifacts[0])
        B, _ = load_artifact(args.artifacts[1])
        return _compare(A, B, args.output)
    spec = _spec(args)
    if cmd == "build":
        _default_route(args)
        M, R = build_module(args, spec)
        quantum = args.route in QUANTUM_ROUTES
        extra = {"convention": args.convention}
        if R is not None:
            extra["truncation"] = R.L
            extra["ambient_dim"] = R.dim
        art = module_artifact(M, args.route, quantum, q0, extra)
        _write(art, args.output)
        bad = uq.relation_violations(M) if quantum else glmn.bracket_violations(M)
        if bad:
            sys.stderr.write("qbbw: built module violates %s\n" % ", ".join(map(str, bad[:4])))
            return EXIT_FAIL
        return EXIT_OK
    if cmd == "export":
        _default_route(args, "bbw")
        if args.route in ("kac", "direct", "qkac", "qdirect"):
            M, _ = build_module(args, spec)
            _write(module_artifact(M, args.route, args.route in QUANTUM_ROUTES, q0), args.output)
            return EXIT_OK
        if args.route not in ROUTES:
            raise InputError("unknown route %r" % args.route)
        R = build_realization(args, spec)
        _write(realization_dump(R, args.route, q0), args.output)
        return EXIT_OK
    if cmd == "character":
        _default_route(args)
        M, _ = build_module(args, spec)
        _write({"algebra": [spec.m, spec.n], "lambda": format_weight(M.lam, spec.m), "route": args.route,
                "dim": M.dim, "character": character_json(M)}, args.output)
        return EXIT_OK
    if cmd == "verify":
        if not args.suite:
            raise InputError("verify needs --suite or --artifact")
        if args.suite in ("classical-relations",) and args.route is None:
            args.route = "kac"
        if args.suite in ("quantum-relations",) and args.route is None:
            args.route = "qkac"
        results = run_suite(args, spec)
        head = {"suite": args.suite, "algebra": [spec.m, spec.n], "convention": args.convention}
        if args.route:
            head["route"] = args.route
        return _report(head, results, args.output)
    if cmd == "compare":
        if not (args.route_a and args.route_b):
            raise InputError("compare needs two artifacts or --route-a/--route-b")
        args.route = args.route_a
        A, _ = build_module(args, spec)
        args.route = args.route_b
        B, _ = build_module(args, spec)
        return _compare(A, B, args.output)
    raise InputError("unknown command %r" % cmd)


def _compare(A, B, path):
    rep = compare_modules(A, B)
    _write(rep, path)
    return EXIT_OK if not rep["diff"] else EXIT_DIFF


def _report(head, results, path):
    ok = all(e["status"] == "pass" for e in results)
    out = dict(head)
    out["results"] = results
    out["ok"] = ok
    _write(out, path)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
