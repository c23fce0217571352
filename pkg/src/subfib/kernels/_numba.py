"""numba-jitted implementations of the hot kernels.

Signatures mirror kernels._python exactly; both paths are exercised by the
test suite and compared by benchmarks/bench_backends.py.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _comp(dom, in_start, in_pos, out_pos, blk_off, comp_flat, g, f):
    x = dom[g]
    n_in = in_start[x + 1] - in_start[x]
    return comp_flat[blk_off[x] + out_pos[g] * n_in + in_pos[f]]


@njit(cache=True)
def _cartesian_flags(dom, cod, in_start, in_mors, out_start, out_mors,
                     t_in_pos, t_out_pos, t_blk, t_flat,
                     bdom, bcod, b_in_start, b_in_pos, b_out_start, b_out_mors,
                     b_out_pos, b_blk, b_flat, p_obj, p_mor):
    n_mor = dom.shape[0]
    flags = np.ones(n_mor, np.uint8)
    for s in range(n_mor):
        B = dom[s]
        A = cod[s]
        sig = p_mor[s]
        ok = True
        for ri in range(in_start[A], in_start[A + 1]):
            r = in_mors[ri]
            C = dom[r]
            rho = p_mor[r]
            pb = p_obj[B]
            pc = p_obj[C]
            for ti in range(b_out_start[pc], b_out_start[pc + 1]):
                tau = b_out_mors[ti]
                if bcod[tau] != pb:
                    continue
                if _comp(bdom, b_in_start, b_in_pos, b_out_pos, b_blk, b_flat,
                         sig, tau) != rho:
                    continue
                cnt = 0
                for ki in range(out_start[C], out_start[C + 1]):
                    t = out_mors[ki]
                    if cod[t] == B and p_mor[t] == tau:
                        if _comp(dom, in_start, t_in_pos, t_out_pos, t_blk,
                                 t_flat, s, t) == r:
                            cnt += 1
                            if cnt > 1:
                                break
                if cnt != 1:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            flags[s] = 0
    return flags


@njit(cache=True)
def _comma_squares(dom, cod, out_start, out_mors, in_start, in_pos, out_pos,
                   blk_off, comp_flat, p_mor, verts):
    nv = verts.shape[0]
    # first pass: count
    count = 0
    for i1 in range(nv):
        v1 = verts[i1]
        d1 = dom[v1]
        c1 = cod[v1]
        for i2 in range(nv):
            v2 = verts[i2]
            d2 = dom[v2]
            c2 = cod[v2]
            for mi in range(out_start[d1], out_start[d1 + 1]):
                m = out_mors[mi]
                if cod[m] != d2:
                    continue
                v2m = _comp(dom, in_start, in_pos, out_pos, blk_off, comp_flat, v2, m)
                pm = p_mor[m]
                for ni in range(out_start[c1], out_start[c1 + 1]):
                    n = out_mors[ni]
                    if cod[n] != c2 or p_mor[n] != pm:
                        continue
                    if _comp(dom, in_start, in_pos, out_pos, blk_off, comp_flat,
                             n, v1) == v2m:
                        count += 1
    out_v1 = np.empty(count, np.int32)
    out_v2 = np.empty(count, np.int32)
    out_m = np.empty(count, np.int32)
    out_n = np.empty(count, np.int32)
    k = 0
    for i1 in range(nv):
        v1 = verts[i1]
        d1 = dom[v1]
        c1 = cod[v1]
        for i2 in range(nv):
            v2 = verts[i2]
            d2 = dom[v2]
            c2 = cod[v2]
            for mi in range(out_start[d1], out_start[d1 + 1]):
                m = out_mors[mi]
                if cod[m] != d2:
                    continue
                v2m = _comp(dom, in_start, in_pos, out_pos, blk_off, comp_flat, v2, m)
                pm = p_mor[m]
                for ni in range(out_start[c1], out_start[c1 + 1]):
                    n = out_mors[ni]
                    if cod[n] != c2 or p_mor[n] != pm:
                        continue
                    if _comp(dom, in_start, in_pos, out_pos, blk_off, comp_flat,
                             n, v1) == v2m:
                        out_v1[k] = i1
                        out_v2[k] = i2
                        out_m[k] = m
                        out_n[k] = n
                        k += 1
    return out_v1, out_v2, out_m, out_n


def cartesian_flags(tct, bct, p_obj, p_mor):
    dom, cod, _, in_start, in_mors, in_pos, out_start, out_mors, out_pos, blk, flat = tct
    bdom, bcod, _, b_in_start, _, b_in_pos, b_out_start, b_out_mors, b_out_pos, b_blk, b_flat = bct
    return _cartesian_flags(dom, cod, in_start, in_mors, out_start, out_mors,
                            in_pos, out_pos, blk, flat,
                            bdom, bcod, b_in_start, b_in_pos, b_out_start,
                            b_out_mors, b_out_pos, b_blk, b_flat, p_obj, p_mor)


def comma_squares(tct, p_mor, is_ident_base):
    dom, cod, _, in_start, _, in_pos, out_start, out_mors, out_pos, blk, flat = tct
    n_mor = dom.shape[0]
    verts = np.array([k for k in range(n_mor) if is_ident_base[p_mor[k]]], np.int32)
    v1, v2, m, n = _comma_squares(dom, cod, out_start, out_mors, in_start,
                                  in_pos, out_pos, blk, flat, p_mor, verts)
    return verts, v1, v2, m, n
