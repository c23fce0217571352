"""Pure numpy/python fallback implementations of the hot kernels."""

from __future__ import annotations

import numpy as np


def _comp(ct, g, f):
    dom, _, _, in_start, _, in_pos, _, _, out_pos, blk_off, comp_flat = ct
    x = dom[g]
    n_in = in_start[x + 1] - in_start[x]
    return comp_flat[blk_off[x] + out_pos[g] * n_in + in_pos[f]]


def cartesian_flags(tct, bct, p_obj, p_mor):
    """Brute-force cartesianness of every total morphism.

    s: B -> A over sigma is cartesian iff for every r: C -> A and every base
    tau with sigma∘tau = p(r) there is exactly one t: C -> B over tau with
    s∘t = r.
    """
    dom, cod, _, in_start, in_mors, _, out_start, out_mors, _, _, _ = tct
    bdom, bcod = bct[0], bct[1]
    n_mor = len(dom)
    flags = np.ones(n_mor, np.uint8)
    for s in range(n_mor):
        B, A = dom[s], cod[s]
        sig = p_mor[s]
        ok = True
        for r in in_mors[in_start[A]:in_start[A + 1]]:
            C = dom[r]
            rho = p_mor[r]
            # candidate taus: base morphisms p(C) -> p(B) with sig∘tau = rho
            pb, pc = p_obj[B], p_obj[C]
            for tau in bct[7][bct[6][pc]:bct[6][pc + 1]]:  # base out-group of p(C)
                if bcod[tau] != pb or _comp(bct, sig, tau) != rho:
                    continue
                cnt = 0
                for t in out_mors[out_start[C]:out_start[C + 1]]:
                    if cod[t] == B and p_mor[t] == tau and _comp(tct, s, t) == r:
                        cnt += 1
                        if cnt > 1:
                            break
                if cnt != 1:
                    ok = False
                    break
            if not ok:
                break
        flags[s] = 1 if ok else 0
    return flags


def comma_squares(tct, p_mor, is_ident_base):
    """Vertical morphisms and the commuting squares between them.

    Returns (verts, v1, v2, m, n) where verts lists the vertical morphism
    indices and each square (verts[v1[i]] -> verts[v2[i]]) has components
    m[i], n[i] with equal base image and n∘dom-leg = cod-leg∘m.
    """
    dom, cod, _, _, _, _, out_start, out_mors, _, _, _ = tct
    n_mor = len(dom)
    verts = np.array([k for k in range(n_mor) if is_ident_base[p_mor[k]]], np.int32)
    out_v1, out_v2, out_m, out_n = [], [], [], []
    for i1, v1 in enumerate(verts):
        d1, c1 = dom[v1], cod[v1]
        for i2, v2 in enumerate(verts):
            d2, c2 = dom[v2], cod[v2]
            for m in out_mors[out_start[d1]:out_start[d1 + 1]]:
                if cod[m] != d2:
                    continue
                v2m = _comp(tct, v2, m)
                pm = p_mor[m]
                for n in out_mors[out_start[c1]:out_start[c1 + 1]]:
                    if cod[n] != c2 or p_mor[n] != pm:
                        continue
                    if _comp(tct, n, v1) == v2m:
                        out_v1.append(i1)
                        out_v2.append(i2)
                        out_m.append(m)
                        out_n.append(n)
    return (verts,
            np.array(out_v1, np.int32), np.array(out_v2, np.int32),
            np.array(out_m, np.int32), np.array(out_n, np.int32))
