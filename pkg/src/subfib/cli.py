"""Command line interface: model ingestion, builders, derivation rules,
check suites and dot-graph emission.

Exit codes: 0 success / all checks pass, 1 check failures, 2 usage or
parse errors.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ParseError, SubfibError, ValidationError
from .fibration import vertical_opposite
from .funty import (check_fun_structure, derive_fun_subtyping,
                    derive_lam_typing, fun_structure_doctrine,
                    fun_structure_subobject, stage_passed)
from .gcwf import (CoercedTermJ, SubtypeJ, TypeJ, check_gcwf,
                   check_sigma_faithful, render_judgement, rule_sbsm,
                   rule_sbst, rule_trans, rule_wkn)
from .models import (doctrine_gcwf, finset_skeleton, heyting_sample,
                     kernel_pair_gcwf, subobject_gcwf)
from .modelio import (ModelFile, load_model, model_of_fibration,
                      model_of_fun_structure, model_of_gcwf, save_model)
from .monad import T_fib, T_gcwf, check_monad_laws_fib, check_monad_laws_gcwf
from .report import Report


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"validation error:\n{exc}", file=sys.stderr)
        return 1
    except SubfibError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subfib",
        description="finite fibrations, gcwfs and categorical subtyping")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="validate every entity in a model file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("build", help="construct a fixture and write it out")
    p.add_argument("target", choices=["finset", "kernel-pair", "subobject",
                                      "doctrine", "comma", "t-gcwf", "vop"])
    p.add_argument("--n", type=int, default=2,
                   help="size parameter for finset-backed targets")
    p.add_argument("--model", help="input model file (comma, t-gcwf, vop)")
    p.add_argument("--name", help="entity name inside the input model")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("derive", help="run a derivation rule on judgements")
    p.add_argument("rule", choices=["sbsm", "trans", "wkn", "sbst",
                                    "fun-sub", "lam"])
    p.add_argument("--model", required=True)
    p.add_argument("--premises", nargs="+", required=True,
                   help="judgement ids, e.g. 'sub@CTX@WITNESS@SUB@SUP'")
    p.add_argument("--name", help="gcwf or fun-structure name in the model")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("check", help="run a verification suite on a model")
    p.add_argument("suite", choices=["gcwf", "faithful", "monad-laws",
                                     "fun-structure"])
    p.add_argument("--model", required=True)
    p.add_argument("--name", help="entity name (defaults to the unique one)")
    p.add_argument("--require-stage2", action="store_true",
                   help="fail fun-structure checks when stage 2 fails")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("graph", help="emit a dot digraph of a model entity")
    p.add_argument("file")
    p.add_argument("--name", help="category or fibration to draw")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_graph)
    return parser


# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    mf = load_model(args.file)   # raises ValidationError on law failures
    n = (len(mf.categories) + len(mf.functors) + len(mf.transformations)
         + len(mf.fibrations) + len(mf.gcwfs) + len(mf.fun_structures))
    print(f"{args.file}: {n} entities, all valid")
    for name in sorted(mf.fibrations):
        c = mf.fibrations[name].classify()
        print(f"  {name}: fibration={c.is_fibration} split={c.split} "
              f"faithful={c.faithful} discrete={c.discrete}")
    return 0


def cmd_build(args) -> int:
    target = args.target
    if target == "finset":
        C = finset_skeleton(args.n)
        mf = ModelFile()
        mf.add_category(f"finset{args.n}", C)
    elif target == "kernel-pair":
        G = kernel_pair_gcwf(finset_skeleton(args.n))
        mf = model_of_gcwf(f"kernel_pair_finset{args.n}", G)
    elif target == "subobject":
        G = subobject_gcwf(args.n)
        mf = model_of_gcwf(f"subobject{args.n}", G)
        FS = fun_structure_subobject(G)
        model_of_fun_structure(f"subobject{args.n}.fun", FS,
                               f"subobject{args.n}", mf)
    elif target == "doctrine":
        fib, hspec = heyting_sample()
        G = doctrine_gcwf(fib)
        mf = model_of_gcwf("doctrine", G)
        FS = fun_structure_doctrine(G, hspec)
        model_of_fun_structure("doctrine.fun", FS, "doctrine", mf)
    elif target in ("comma", "vop"):
        if not args.model:
            raise ParseError(f"build {target} requires --model")
        src = load_model(args.model)
        F = _pick(src.fibrations, args.name, "fibration")
        if target == "comma":
            Tp = T_fib(F)
            mf = model_of_fibration("comma", Tp.fibration)
            mf.functors["comma.dom"] = Tp.dom_proj
            mf.functors["comma.cod"] = Tp.cod_proj
            mf.categories.setdefault("source.total", F.total)
        else:
            V = vertical_opposite(F)
            mf = model_of_fibration("vop", V)
    elif target == "t-gcwf":
        if not args.model:
            raise ParseError("build t-gcwf requires --model")
        src = load_model(args.model)
        G = _pick(src.gcwfs, args.name, "gcwf")
        TD = T_gcwf(G)
        mf = model_of_gcwf("t_gcwf", TD.T_object)
    else:  # pragma: no cover
        raise ParseError(f"unknown build target {target!r}")
    save_model(mf, args.output)
    print(f"wrote {args.output}")
    return 0


def _pick(table: dict, name: str | None, kind: str):
    if name is not None:
        if name not in table:
            raise ParseError(f"no {kind} named {name!r} in the model")
        return table[name]
    if len(table) != 1:
        raise ParseError(
            f"model has {len(table)} {kind}s; pick one with --name "
            f"(available: {', '.join(sorted(table))})")
    return next(iter(table.values()))


def parse_judgement(text: str):
    parts = text.split("@")
    try:
        if parts[0] == "ty" and len(parts) == 3:
            return TypeJ(parts[1], parts[2])
        if parts[0] == "sub" and len(parts) == 5:
            return SubtypeJ(parts[1], parts[2], parts[3], parts[4])
        if parts[0] == "ct" and len(parts) == 5:
            return CoercedTermJ(parts[1], parts[2], parts[3], parts[4])
    except IndexError:
        pass
    raise ParseError(
        f"bad judgement id {text!r}; use ty@CTX@TYPE, sub@CTX@W@SUB@SUP "
        f"or ct@CTX@TERM@W@TYPE")


def cmd_derive(args) -> int:
    mf = load_model(args.model)
    premises = [parse_judgement(t) for t in args.premises]
    rule = args.rule
    if rule in ("fun-sub", "lam"):
        FS = _pick(mf.fun_structures, args.name, "fun-structure")
        if rule == "fun-sub":
            _need(premises, (SubtypeJ, SubtypeJ), rule)
            out = derive_fun_subtyping(FS, premises[0], premises[1])
        else:
            # an optional trailing type premise pins the unweakened target
            if len(premises) == 3:
                _need(premises, (TypeJ, CoercedTermJ, TypeJ), rule)
                out = derive_lam_typing(FS, premises[0].type_, premises[1],
                                        B=premises[2].type_)
            else:
                _need(premises, (TypeJ, CoercedTermJ), rule)
                out = derive_lam_typing(FS, premises[0].type_, premises[1])
    else:
        G = _pick(mf.gcwfs, args.name, "gcwf")
        if rule == "sbsm":
            _need(premises, (CoercedTermJ, SubtypeJ), rule)
            out = rule_sbsm(G, premises[0], premises[1])
        elif rule == "trans":
            _need(premises, (SubtypeJ, SubtypeJ), rule)
            out = rule_trans(G, premises[0], premises[1])
        elif rule == "wkn":
            _need(premises, (SubtypeJ, TypeJ), rule)
            out = rule_wkn(G, premises[0], premises[1].type_)
        else:
            _need(premises, (SubtypeJ, CoercedTermJ), rule)
            out = rule_sbst(G, premises[0], premises[1])
    for j in premises:
        print(f"premise    {render_judgement(j)}")
    print(f"conclusion {render_judgement(out)}")
    return 0


def _need(premises, shapes, rule):
    if len(premises) != len(shapes) or not all(
            isinstance(j, s) for j, s in zip(premises, shapes)):
        want = ", ".join(s.__name__ for s in shapes)
        raise ParseError(f"derive {rule} needs premises ({want})")


def cmd_check(args) -> int:
    mf = load_model(args.model)
    if args.suite == "gcwf":
        G = _pick(mf.gcwfs, args.name, "gcwf")
        rep = check_gcwf(G)
    elif args.suite == "faithful":
        G = _pick(mf.gcwfs, args.name, "gcwf")
        rep = check_sigma_faithful(G)
    elif args.suite == "monad-laws":
        G = _pick(mf.gcwfs, args.name, "gcwf")
        rep = Report(f"monad-laws:{G.name}")
        rep.extend(check_monad_laws_fib(G.u))
        rep.extend(check_monad_laws_gcwf(G))
    else:
        FS = _pick(mf.fun_structures, args.name, "fun-structure")
        rep = check_fun_structure(FS.owner, FS)
        print(rep.render_full())
        s1, s2 = stage_passed(rep, "stage1"), stage_passed(rep, "stage2")
        print(f"stage 1: {'pass' if s1 else 'FAIL'}")
        print(f"stage 2: {'pass' if s2 else 'FAIL'}")
        if not s1:
            return 1
        return 1 if (args.require_stage2 and not s2) else 0
    print(rep.render_full())
    return rep.exit_code


def cmd_graph(args) -> int:
    mf = load_model(args.file)
    name = args.name
    fib = None
    if name is not None and name in mf.fibrations:
        fib = mf.fibrations[name]
        cat = fib.total
    elif name is not None and name in mf.categories:
        cat = mf.categories[name]
    elif name is not None:
        raise ParseError(f"no category or fibration named {name!r}")
    elif len(mf.fibrations) == 1:
        fib = next(iter(mf.fibrations.values()))
        cat = fib.total
    elif len(mf.categories) == 1:
        cat = next(iter(mf.categories.values()))
    else:
        raise ParseError("ambiguous model; pick an entity with --name")
    lines = ["digraph model {"]
    for x in sorted(cat.objects):
        lines.append(f'  "{x}";')
    for m in sorted(cat.morphisms):
        if cat.is_identity(m):
            continue
        d, c = cat.morphisms[m]
        style = ""
        if fib is not None and fib.is_vertical(m):
            style = ", style=bold, color=blue"
        lines.append(f'  "{d}" -> "{c}" [label="{m}"{style}];')
    lines.append("}")
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
