"""JSON model files: named categories, functors, transformations,
fibrations, gcwfs and fun-structures with cross-references by name.

Serialization is canonical (sorted keys, sorted composition triples, two
space indent, trailing newline), so load followed by save is byte-identical
on canonicalized files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ParseError, ValidationError
from .fincat import FinCategory, FinFunctor, NatTransformation, validate
from .fibration import Fibration
from .funty import FunStructure
from .gcwf import Gcwf
from .report import Report

FORMAT_VERSION = 1


@dataclass
class ModelFile:
    categories: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)
    transformations: dict = field(default_factory=dict)
    fibrations: dict = field(default_factory=dict)
    gcwfs: dict = field(default_factory=dict)
    fun_structures: dict = field(default_factory=dict)

    def add_category(self, name: str, C: FinCategory) -> str:
        self.categories[name] = C
        return name

    def add_functor(self, name: str, F: FinFunctor) -> str:
        self.functors[name] = F
        return name

    def add_fibration(self, name: str, F: Fibration) -> str:
        self.fibrations[name] = F
        return name


# ---------------------------------------------------------------------------
# encoding


def _enc_category(C: FinCategory) -> dict:
    return {
        "objects": sorted(C.objects),
        "morphisms": {m: {"dom": d, "cod": c}
                      for m, (d, c) in sorted(C.morphisms.items())},
        "identity": dict(sorted(C.identity.items())),
        "compose": sorted([g, f, gf] for (g, f), gf in C.compose.items()),
    }


def _enc_functor(F: FinFunctor, names: dict) -> dict:
    return {
        "source": names[id(F.source)],
        "target": names[id(F.target)],
        "object_map": dict(sorted(F.object_map.items())),
        "morphism_map": dict(sorted(F.morphism_map.items())),
    }


def _enc_nat(a: NatTransformation, fnames: dict) -> dict:
    return {
        "source": fnames[id(a.source)],
        "target": fnames[id(a.target)],
        "components": dict(sorted(a.components.items())),
    }


def encode_model(mf: ModelFile) -> dict:
    cat_names = {id(C): n for n, C in mf.categories.items()}
    fun_names = {id(F): n for n, F in mf.functors.items()}
    doc = {"version": FORMAT_VERSION,
           "categories": {n: _enc_category(C)
                          for n, C in sorted(mf.categories.items())},
           "functors": {n: _enc_functor(F, cat_names)
                        for n, F in sorted(mf.functors.items())},
           "transformations": {n: _enc_nat(a, fun_names)
                               for n, a in sorted(mf.transformations.items())},
           "fibrations": {}, "gcwfs": {}, "fun_structures": {}}
    for n, F in sorted(mf.fibrations.items()):
        doc["fibrations"][n] = {
            "functor": fun_names[id(F.p)],
            "cleavage": (sorted([a, s, m] for (a, s), m in F.cleavage.items())
                         if F.cleavage is not None else None),
            "split": bool(F.split_marked),
        }
    fib_names = {id(F): n for n, F in mf.fibrations.items()}
    for n, G in sorted(mf.gcwfs.items()):
        doc["gcwfs"][n] = {
            "base": cat_names[id(G.base)],
            "u": fib_names[id(G.u)],
            "udot": fib_names[id(G.udot)],
            "sigma": fun_names[id(G.Sigma)],
            "delta": fun_names[id(G.Delta)],
            "eta": {k: v for k, v in sorted(G.eta.components.items())},
            "eps": {k: v for k, v in sorted(G.eps.components.items())},
        }
    gcwf_names = {id(G): n for n, G in mf.gcwfs.items()}
    for n, FS in sorted(mf.fun_structures.items()):
        doc["fun_structures"][n] = {
            "owner": gcwf_names[id(FS.owner)],
            "vop": fib_names[id(FS.vop)],
            "corner": cat_names[id(FS.corner)],
            "corner_proj": [fun_names[id(FS.corner_proj[0])],
                            fun_names[id(FS.corner_proj[1])]],
            "corner_base": dict(sorted(FS.corner_base.items())),
            "fun": fun_names[id(FS.Fun)],
            "w": fun_names[id(FS.W)],
            "pairs": cat_names[id(FS.pairs)],
            "p_category": cat_names[id(FS.P)],
            "p_parts": {k: list(v) for k, v in sorted(FS.P_parts.items())},
            "lam": fun_names[id(FS.lam)],
            "vop_obj": dict(sorted(FS.vop_obj.items())),
            "vop_vert": dict(sorted(FS.vop_vert.items())),
        }
    return doc


def canonical_dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def save_model(mf: ModelFile, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_dumps(encode_model(mf)))


# ---------------------------------------------------------------------------
# decoding


def _dec_category(name: str, doc: dict) -> FinCategory:
    try:
        mors = {m: (e["dom"], e["cod"]) for m, e in doc["morphisms"].items()}
        comp = {(g, f): gf for g, f, gf in doc["compose"]}
        return FinCategory(doc["objects"], mors, doc["identity"], comp,
                           name=name)
    except KeyError as exc:
        raise ParseError(f"category {name!r}: missing field {exc}") from None


def load_model(path: str, validate_entities: bool = True) -> ModelFile:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from None
    if not isinstance(doc, dict) or doc.get("version") != FORMAT_VERSION:
        raise ParseError(f"{path}: not a version-{FORMAT_VERSION} model file")
    mf = ModelFile()
    from .errors import MalformedEntity
    try:
        for n, cdoc in doc.get("categories", {}).items():
            mf.categories[n] = _dec_category(n, cdoc)
        for n, fdoc in doc.get("functors", {}).items():
            src = _resolve(mf.categories, fdoc["source"], "category")
            tgt = _resolve(mf.categories, fdoc["target"], "category")
            mf.functors[n] = FinFunctor(src, tgt, fdoc["object_map"],
                                        fdoc["morphism_map"], name=n)
        for n, tdoc in doc.get("transformations", {}).items():
            src = _resolve(mf.functors, tdoc["source"], "functor")
            tgt = _resolve(mf.functors, tdoc["target"], "functor")
            mf.transformations[n] = NatTransformation(src, tgt,
                                                      tdoc["components"], name=n)
        for n, fdoc in doc.get("fibrations", {}).items():
            p = _resolve(mf.functors, fdoc["functor"], "functor")
            cleav = fdoc.get("cleavage")
            cleavage = {(a, s): m for a, s, m in cleav} if cleav is not None else None
            mf.fibrations[n] = Fibration(p, cleavage,
                                         split_marked=bool(fdoc.get("split")))
        for n, gdoc in doc.get("gcwfs", {}).items():
            base = _resolve(mf.categories, gdoc["base"], "category")
            u = _resolve(mf.fibrations, gdoc["u"], "fibration")
            udot = _resolve(mf.fibrations, gdoc["udot"], "fibration")
            sigma = _resolve(mf.functors, gdoc["sigma"], "functor")
            delta = _resolve(mf.functors, gdoc["delta"], "functor")
            eta = NatTransformation(FinFunctor.identity(udot.p.source),
                                    sigma.then(delta), gdoc["eta"],
                                    name=f"{n}.eta")
            eps = NatTransformation(delta.then(sigma),
                                    FinFunctor.identity(u.p.source),
                                    gdoc["eps"], name=f"{n}.eps")
            mf.gcwfs[n] = Gcwf(base, u, udot, sigma, delta, eta, eps, name=n)
        for n, sdoc in doc.get("fun_structures", {}).items():
            owner = _resolve(mf.gcwfs, sdoc["owner"], "gcwf")
            lam = _resolve(mf.functors, sdoc["lam"], "functor")
            fun = _resolve(mf.functors, sdoc["fun"], "functor")
            proj = (_resolve(mf.functors, sdoc["corner_proj"][0], "functor"),
                    _resolve(mf.functors, sdoc["corner_proj"][1], "functor"))
            mf.fun_structures[n] = FunStructure(
                owner=owner,
                vop=_resolve(mf.fibrations, sdoc["vop"], "fibration"),
                corner=_resolve(mf.categories, sdoc["corner"], "category"),
                corner_proj=proj,
                corner_base=sdoc["corner_base"],
                Fun=fun,
                W=_resolve(mf.functors, sdoc["w"], "functor"),
                pairs=_resolve(mf.categories, sdoc["pairs"], "category"),
                P=_resolve(mf.categories, sdoc["p_category"], "category"),
                P_parts={k: tuple(v) for k, v in sdoc["p_parts"].items()},
                lam=lam,
                squares={"right-square": (lam.then(owner.Sigma),
                                          _proj_then(proj[0], lam, fun, sdoc,
                                                     mf))},
                vop_obj=sdoc["vop_obj"],
                vop_vert=sdoc["vop_vert"],
            )
    except MalformedEntity as exc:
        raise ParseError(str(exc)) from None
    except KeyError as exc:
        raise ParseError(f"{path}: missing field {exc}") from None
    if validate_entities:
        _validate_all(mf)
    return mf


def _proj_then(proj0, lam, fun, sdoc, mf):
    # the recorded right-square partner: pr then Fun, rebuilt from parts
    P = mf.categories[sdoc["p_category"]]
    parts = sdoc["p_parts"]
    omap = {o: fun.object_map[parts[o][0]] for o in P.objects}
    mmap = {m: fun.morphism_map[parts[m][0]] for m in P.morphisms}
    return FinFunctor(P, fun.target, omap, mmap, name="pr;Fun")


def _resolve(table: dict, name: str, kind: str):
    if name not in table:
        raise ParseError(f"dangling {kind} reference {name!r}")
    return table[name]


def _validate_all(mf: ModelFile) -> None:
    rep = Report("model")
    for n, C in mf.categories.items():
        rep.extend(validate(C))
    for n, F in mf.functors.items():
        rep.extend(validate(F))
    for n, a in mf.transformations.items():
        rep.extend(validate(a))
    if not rep.passed:
        raise ValidationError(rep.render(), report=rep)


# ---------------------------------------------------------------------------
# bundling whole structures


def model_of_fibration(name: str, F: Fibration, mf: ModelFile | None = None
                       ) -> ModelFile:
    mf = mf if mf is not None else ModelFile()
    mf.categories[f"{name}.total"] = F.total
    if id(F.base) not in {id(c) for c in mf.categories.values()}:
        mf.categories[f"{name}.base"] = F.base
    mf.functors[f"{name}.p"] = F.p
    mf.fibrations[name] = F
    return mf


def model_of_gcwf(name: str, G: Gcwf, mf: ModelFile | None = None) -> ModelFile:
    mf = mf if mf is not None else ModelFile()
    mf.categories[f"{name}.base"] = G.base
    mf.categories[f"{name}.types"] = G.u.total
    mf.categories[f"{name}.terms"] = G.udot.total
    mf.functors[f"{name}.u"] = G.u.p
    mf.functors[f"{name}.udot"] = G.udot.p
    mf.functors[f"{name}.sigma"] = G.Sigma
    mf.functors[f"{name}.delta"] = G.Delta
    mf.fibrations[f"{name}.u"] = G.u
    mf.fibrations[f"{name}.udot"] = G.udot
    mf.gcwfs[name] = G
    return mf


def model_of_fun_structure(name: str, FS: FunStructure, gcwf_name: str,
                           mf: ModelFile) -> ModelFile:
    mf.fibrations[f"{name}.vop"] = FS.vop
    mf.categories[f"{name}.vop.total"] = FS.vop.total
    mf.functors[f"{name}.vop.p"] = FS.vop.p
    mf.categories[f"{name}.corner"] = FS.corner
    mf.functors[f"{name}.pr1"] = FS.corner_proj[0]
    mf.functors[f"{name}.pr2"] = FS.corner_proj[1]
    mf.categories[f"{name}.pairs"] = FS.pairs
    mf.categories[f"{name}.extpairs"] = FS.W.target
    mf.categories[f"{name}.P"] = FS.P
    mf.functors[f"{name}.fun"] = FS.Fun
    mf.functors[f"{name}.w"] = FS.W
    mf.functors[f"{name}.lam"] = FS.lam
    mf.fun_structures[name] = FS
    return mf
