"""W(3) from two sides: the symplectic model and the coset geometry of a
Kantor family in H_1(3).  Prints the checks as it goes."""
import itertools

import numpy as np

from stgq.autm import averaging_check, benson_check, symmetries_with_center
from stgq.classical import build_w
from stgq.gq import ar1_check, gq_isomorphic, regular_points, verify_gq
from stgq.kantor import classical_w_family, coset_geometry, verify_stgq_family
from stgq.subgeo import comblem_plane, dual_net, plane_completion, verify_projective_plane


def main():
    g = build_w(3)
    v = verify_gq(g)
    print(f"W(3): {g.n_points} points, {g.n_lines} lines, order {v.order}")
    print(f"regular points: {len(regular_points(g))}")

    K = classical_w_family(3)
    print(f"family in {K.group.name}: STGQ {bool(verify_stgq_family(K))}, |S| = {K.S.order}")
    cg, action = coset_geometry(K)
    print(f"coset geometry isomorphic to W(3): {gq_isomorphic(cg, g).verdict}")

    syms = symmetries_with_center(cg, 0, action)
    r = benson_check(cg, syms[1])
    print("a symmetry:", {k: r.parameters[k] for k in ("fix", "g", "lhs_mod", "rhs_mod")})
    print("averaging:", averaging_check(cg, 0, action).parameters["distribution"])

    print("AR1 at 0:", ar1_check(g, 0)["verdict"])
    lines_x = [int(L) for L in np.nonzero(g.inc[0])[0]]
    ok = all(comblem_plane(g, X, Y)[1].verdict for X, Y in itertools.permutations(lines_x, 2))
    print(f"affine planes for all {len(lines_x) * (len(lines_x) - 1)} ordered pairs on 0: {ok}")
    net = dual_net(g, 0)
    P = plane_completion(net)
    print(f"dual net {net.n_points}/{net.n_lines}, completion a plane of order 3: {verify_projective_plane(P, 3).verdict}")


if __name__ == "__main__":
    main()
