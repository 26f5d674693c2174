"""Twisting an elation group of H(3,4) into a second, nonisomorphic one."""
from stgq.autm import verify_elation_group
from stgq.gq import verify_gq
from stgq.grp import heisenberg
from stgq.kantor import coset_geometry, search_kantor_families
from stgq.subgeo import subgq_plane, twist


def main():
    K = search_kantor_families(heisenberg(2, 2), 4, 2)[0]
    g, action = coset_geometry(K)
    print(f"coset geometry of order {verify_gq(g).order}")
    tw = twist(g, 0, action)
    rp = tw.reports
    print(f"|H| = {len(tw.H)}, |H1| = {len(tw.H1)}, fixed subGQ of order {tw.subgq.order}")
    print(f"H- is an elation group: {verify_elation_group(g, 0, tw.Hminus).verdict}")
    print(f"H- isomorphic to H: {rp['isomorphic']} ({rp['invariant']})")
    plane, r = subgq_plane(g, 0, tw.sylow_family)
    print(f"{len(tw.sylow_family)} subGQs in the Sylow family; their plane: {plane.n_points} points, {plane.n_lines} lines, affine {r.verdict}")


if __name__ == "__main__":
    main()
