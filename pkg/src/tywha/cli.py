"""Command-line front end.

Exit codes: 0 on success, 1 when a verification fails, 2 on usage or input
errors.  Every report can be duplicated to JSON with --json; identical inputs
produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import TYAlgebra
from .classify import g_algebra_classes, realize_and_verify, weak_coideal_classes
from .coideals import (
    build_I_m_K,
    build_I_Omega_K,
    build_no_m,
    build_with_m,
    is_coideal,
    is_indecomposable,
    measured_dims,
    spectral_dims,
    verify_weak_coideal,
)
from .errors import InvariantError, SizeError, StructuralError
from .groups import (
    Bicharacter,
    FiniteAbelianGroup,
    Subgroup,
    enumerate_subgroups,
    orthogonal,
    quotient,
)
from .linalg import DEFAULT_TOL


def _parse_group(text: str) -> FiniteAbelianGroup:
    return FiniteAbelianGroup.from_spec(text)


def _parse_bichar(group: FiniteAbelianGroup, source: str) -> Bicharacter:
    if source == "standard":
        chi = Bicharacter.standard(group)
    else:
        path = Path(source)
        if not path.exists():
            raise InvariantError(f"bicharacter file not found: {source}")
        chi = Bicharacter.from_json(group, json.loads(path.read_text()))
    if not chi.is_nondegenerate():
        raise InvariantError("bicharacter degenerate")
    return chi


def _parse_elements(group: FiniteAbelianGroup, text: str) -> list:
    if not text.strip():
        return []
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        out.append(group.reduce([int(x) for x in part.split(",")]))
    return out


def _parse_cosets(quot, group, text: str) -> list:
    if text.strip() == "all":
        return list(quot.cosets)
    reps = _parse_elements(group, text)
    seen = []
    for r in reps:
        c = quot.coset_of(r)
        if c not in seen:
            seen.append(c)
    return seen


def _tau_sign(flag: str) -> int:
    return 1 if flag == "+" else -1


def _write_json(path: str, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _algebra(args) -> TYAlgebra:
    group = _parse_group(args.group)
    chi = _parse_bichar(group, args.bichar)
    if args.tol <= 0:
        raise InvariantError("tolerance must be positive")
    return TYAlgebra(group, chi, _tau_sign(args.tau), eps=args.tol)


# -- commands -------------------------------------------------------------------


def cmd_group_describe(args) -> int:
    group = _parse_group(args.group)
    chi = _parse_bichar(group, args.bichar)
    subs = enumerate_subgroups(group)
    lines = [f"group {group}  order {group.order}  factors {','.join(map(str, group.factors))}"]
    lines.append(f"{'K':<28}{'|K|':<6}{'K_perp':<28}{'note'}")
    payload = []
    for K in subs:
        perp = orthogonal(chi, K)
        marker = "K = K_perp" if perp.elements == K.elements else ""
        lines.append(f"{str(K):<28}{K.order:<6}{str(perp):<28}{marker}")
        payload.append(
            {
                "K": [list(e) for e in K.sorted_elements],
                "K_perp": [list(e) for e in perp.sorted_elements],
                "self_orthogonal": perp.elements == K.elements,
            }
        )
    print("\n".join(lines))
    if args.json:
        _write_json(
            args.json,
            {
                "schema": "tywha-group/1",
                "group": list(group.factors),
                "bicharacter": chi.to_json(),
                "subgroups": payload,
            },
        )
    return 0


def cmd_wha_verify(args) -> int:
    alg = _algebra(args)
    report = alg.verify_axioms(seed=args.seed, samples=args.samples)
    print(report.summary())
    if args.json:
        _write_json(args.json, {"schema": "tywha-axioms/1", **report.to_dict()})
    return 0 if report.passed else 1


def cmd_wha_export(args) -> int:
    alg = _algebra(args)
    _write_json(args.json, alg.export_data())
    print(f"wrote ty-wha/1 structure constants ({alg.dim} basis units) to {args.json}")
    return 0


def cmd_coideal_build(args) -> int:
    alg = _algebra(args)
    group = alg.group
    gens = _parse_elements(group, args.K)
    K = Subgroup.generated(group, gens)
    perp = orthogonal(alg.bichar, K)
    q0 = quotient(group, K)
    q1 = quotient(group, perp)
    z0 = _parse_cosets(q0, group, args.Z0)
    z1 = _parse_cosets(q1, group, args.Z1)

    if args.builder == "I_m_K":
        wc = build_I_m_K(alg, K)
    elif args.builder == "I_Omega_K":
        wc = build_I_Omega_K(alg, K)
    elif args.builder == "no_m":
        if z0 and z1:
            raise InvariantError("builder no_m takes exactly one of --Z0/--Z1")
        wc = build_no_m(alg, K, z0 or z1, side=0 if z0 else 1)
    elif args.builder == "with_m":
        if len(z1) != 1:
            raise InvariantError("builder with_m needs --Z1 with exactly one representative")
        wc = build_with_m(alg, K, z0, z1[0])
    elif z0 and not z1:
        wc = build_no_m(alg, K, z0, side=0)
    elif z1 and not z0:
        wc = build_no_m(alg, K, z1, side=1)
    elif z0 and z1:
        if len(z0) > 1 and len(z1) > 1:
            raise InvariantError("no class has both |Z0| > 1 and |Z1| > 1")
        if len(z0) == len(q0.cosets) and len(z1) == 1:
            wc = build_with_m(alg, K, z0, z1[0])
        elif len(z1) == len(q1.cosets) and len(z0) == 1:
            wc = build_with_m(alg, perp, z1, z0[0])
        elif len(z1) == 1:
            wc = build_with_m(alg, K, z0, z1[0])
        else:
            wc = build_with_m(alg, perp, z1, z0[0])
    else:
        raise InvariantError("give --builder or at least one of --Z0/--Z1")

    report = verify_weak_coideal(wc)
    predicted = spectral_dims(wc.spec, alg) if wc.spec else {}
    actual = measured_dims(wc)
    dims_ok = all(predicted.get(b, 0) == actual.get(b, 0) for b in set(predicted) | set(actual))
    indec = is_indecomposable(wc) if report.passed else False
    payload = {
        "schema": "tywha-coideal/1",
        **wc.describe(),
        "verified": report.passed,
        "indecomposable": indec,
        "dims_match_prediction": dims_ok,
        "checks": report.to_dict()["checks"],
    }
    print(report.summary())
    print(
        f"dim A = {wc.dim}; is_coideal = {is_coideal(wc)}; indecomposable = {indec}; "
        f"fiber dims {'match' if dims_ok else 'DIFFER from'} prediction"
    )
    if args.json:
        _write_json(args.json, payload)
    return 0 if (report.passed and dims_ok) else 1


def cmd_classify_weak(args) -> int:
    group = _parse_group(args.group)
    chi = _parse_bichar(group, args.bichar)
    report = weak_coideal_classes(group, chi)
    payload = {"schema": "tywha-classify/1", **report.to_dict()}
    alg = None
    all_ok = True
    if args.realize:
        alg = TYAlgebra(group, chi, _tau_sign(args.tau), eps=args.tol)
    print(f"weak-coideal classes of {group}: {report.total} total, {report.total_coideal} coideal-containing")
    for entry, entry_dict in zip(report.per_subgroup, payload["per_subgroup"]):
        action = "translations+flip" if entry.flip else "translations"
        print(
            f"  K={entry.subgroup} ({action}): {len(entry.orbits)} classes, "
            f"{entry.coideal_count} coideal, Burnside check {entry.burnside_count}"
        )
        if args.realize:
            for orbit, orbit_dict in zip(entry.orbits, entry_dict["orbits"]):
                try:
                    result = realize_and_verify(alg, orbit)
                    orbit_dict["realized"] = result["builder"]
                    orbit_dict["verified"] = True
                except StructuralError as exc:
                    orbit_dict["realized"] = None
                    orbit_dict["verified"] = False
                    all_ok = False
                    print(f"    realization FAILED: {exc}")
            print(f"    realized and verified {len(entry.orbits)} representatives")
    if args.json:
        _write_json(args.json, payload)
    return 0 if all_ok else 1


def cmd_classify_algebras(args) -> int:
    group = _parse_group(args.group)
    chi = _parse_bichar(group, args.bichar)
    report = g_algebra_classes(group, chi, max_mult=args.max_mult)
    payload = {"schema": "tywha-classify/1", **report.to_dict()}
    print(
        f"algebra classes of {group} with multiplicities <= {args.max_mult}: "
        f"{report.total} total"
    )
    for entry in payload["per_subgroup"]:
        kinds = {t: p["n_classes"] for t, p in entry["types"].items()}
        print(f"  K={entry['K']}: {kinds}")
    if args.json:
        _write_json(args.json, payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tywha",
        description="Construct, verify, and classify the weak Hopf C*-algebra "
        "of Tambara-Yamagami data (G, chi, tau).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tau=True):
        p.add_argument("--group", required=True, help='cyclic factors, e.g. "2,4"')
        p.add_argument("--bichar", default="standard", help='"standard" or a JSON file')
        if tau:
            p.add_argument("--tau", choices=["+", "-"], default="+", help="sign of tau")
            p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="tolerance")
        p.add_argument("--json", default=None, help="duplicate the report to this JSON file")

    group_cmd = sub.add_parser("group", help="group and bicharacter inspection")
    group_sub = group_cmd.add_subparsers(dest="subcommand", required=True)
    p = group_sub.add_parser("describe", help="subgroup lattice with annihilators")
    common(p, tau=False)
    p.set_defaults(func=cmd_group_describe)

    wha_cmd = sub.add_parser("wha", help="construct and verify the algebra")
    wha_sub = wha_cmd.add_subparsers(dest="subcommand", required=True)
    p = wha_sub.add_parser("verify", help="run the full axiom suite")
    common(p)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--samples", type=int, default=10_000)
    p.set_defaults(func=cmd_wha_verify)
    p = wha_sub.add_parser("export", help="emit ty-wha/1 structure constants")
    common(p)
    p.set_defaults(func=cmd_wha_export)

    coideal_cmd = sub.add_parser("coideal", help="build and verify coideal subalgebras")
    coideal_sub = coideal_cmd.add_subparsers(dest="subcommand", required=True)
    p = coideal_sub.add_parser("build", help="assemble a family and verify it")
    common(p)
    p.add_argument("--K", required=True, help='subgroup generators, e.g. "2" or "1,0;0,1"')
    p.add_argument("--Z0", default="", help='coset reps of K ("all" for the full quotient)')
    p.add_argument("--Z1", default="", help="coset reps of the annihilator of K")
    p.add_argument(
        "--builder",
        choices=["no_m", "with_m", "I_m_K", "I_Omega_K"],
        default=None,
        help="force a named builder instead of inferring one",
    )
    p.set_defaults(func=cmd_coideal_build)

    classify_cmd = sub.add_parser("classify", help="enumerate isomorphism classes")
    classify_sub = classify_cmd.add_subparsers(dest="subcommand", required=True)
    p = classify_sub.add_parser("weak-coideals", help="orbit catalog with coideal flags")
    common(p)
    p.add_argument("--realize", action="store_true", help="build and verify every class")
    p.set_defaults(func=cmd_classify_weak)
    p = classify_sub.add_parser("g-algebras", help="bounded multiplicity-vector catalog")
    common(p, tau=False)
    p.add_argument("--max-mult", type=int, default=2, dest="max_mult")
    p.set_defaults(func=cmd_classify_algebras)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvariantError, SizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except StructuralError as exc:
        print(f"structural error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
