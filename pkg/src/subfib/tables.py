"""Integer encoding of finite categories for the enumeration kernels.

A `CatTables` flattens a FinCategory into numpy arrays: morphisms are
indexed 0..M-1, objects 0..N-1 (both in sorted identifier order), and the
composition table is stored as one flat int32 block per object, so that
g∘f is a single index computation.  The encoding is built once per
category and cached write-once on the FinCategory value.
"""

from __future__ import annotations

import numpy as np

# Array tuple layout shared with the kernels:
#   (dom, cod, ident,
#    in_start, in_mors, in_pos,
#    out_start, out_mors, out_pos,
#    blk_off, comp_flat)


class CatTables:
    __slots__ = ("cat", "obj_ids", "mor_ids", "obj_index", "mor_index", "arrays")

    def __init__(self, cat):
        self.cat = cat
        self.obj_ids = list(cat.objects)
        self.mor_ids = sorted(cat.morphisms)
        self.obj_index = {x: i for i, x in enumerate(self.obj_ids)}
        self.mor_index = {m: i for i, m in enumerate(self.mor_ids)}
        n_obj, n_mor = len(self.obj_ids), len(self.mor_ids)

        dom = np.empty(n_mor, np.int32)
        cod = np.empty(n_mor, np.int32)
        for i, m in enumerate(self.mor_ids):
            d, c = cat.morphisms[m]
            dom[i] = self.obj_index[d]
            cod[i] = self.obj_index[c]
        ident = np.array([self.mor_index[cat.identity[x]] for x in self.obj_ids],
                         np.int32)

        in_start, in_mors, in_pos = _group(cod, n_obj, n_mor)
        out_start, out_mors, out_pos = _group(dom, n_obj, n_mor)

        blk_off = np.zeros(n_obj, np.int64)
        total = 0
        for x in range(n_obj):
            blk_off[x] = total
            total += (out_start[x + 1] - out_start[x]) * (in_start[x + 1] - in_start[x])
        comp_flat = np.full(total, -1, np.int32)
        for (g, f), gf in cat.compose.items():
            gi, fi = self.mor_index[g], self.mor_index[f]
            x = dom[gi]
            n_in = in_start[x + 1] - in_start[x]
            comp_flat[blk_off[x] + out_pos[gi] * n_in + in_pos[fi]] = self.mor_index[gf]

        self.arrays = (dom, cod, ident, in_start, in_mors, in_pos,
                       out_start, out_mors, out_pos, blk_off, comp_flat)

    @property
    def n_obj(self):
        return len(self.obj_ids)

    @property
    def n_mor(self):
        return len(self.mor_ids)

    def compose_idx(self, g: int, f: int) -> int:
        dom, _, _, in_start, _, in_pos, _, _, out_pos, blk_off, comp_flat = self.arrays
        x = dom[g]
        n_in = in_start[x + 1] - in_start[x]
        return int(comp_flat[blk_off[x] + out_pos[g] * n_in + in_pos[f]])


def _group(key, n_obj, n_mor):
    """CSR grouping of morphism indices by an object-valued key array."""
    counts = np.zeros(n_obj + 1, np.int64)
    for k in key:
        counts[k + 1] += 1
    start = np.cumsum(counts)
    fill = start[:-1].copy()
    mors = np.empty(n_mor, np.int32)
    pos = np.empty(n_mor, np.int32)
    for m in range(n_mor):  # morphism indices ascend within each group
        x = key[m]
        mors[fill[x]] = m
        pos[m] = fill[x] - start[x]
        fill[x] += 1
    return start, mors, pos


def tables_of(cat) -> CatTables:
    """Write-once cached integer encoding of a FinCategory."""
    t = cat._tables
    if t is None:
        t = CatTables(cat)
        cat._tables = t
    return t


class FibTables:
    """Integer view of a functor p: total -> base, plus vertical mask."""

    __slots__ = ("total", "base", "p_obj", "p_mor", "is_ident_base")

    def __init__(self, total_cat, base_cat, p_obj_map, p_mor_map):
        self.total = tables_of(total_cat)
        self.base = tables_of(base_cat)
        self.p_obj = np.array(
            [self.base.obj_index[p_obj_map[x]] for x in self.total.obj_ids], np.int32)
        self.p_mor = np.array(
            [self.base.mor_index[p_mor_map[m]] for m in self.total.mor_ids], np.int32)
        is_ident = np.zeros(self.base.n_mor, np.uint8)
        bident = self.base.arrays[2]
        is_ident[bident] = 1
        self.is_ident_base = is_ident
