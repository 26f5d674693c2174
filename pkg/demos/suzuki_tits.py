"""The Suzuki-Tits family at q = 8: what holds and what does not."""
from stgq.autm import ab1_equivalence, mstgq1_family_sampled, property_star_family
from stgq.grp import derived_subgroup, suzuki_tits_matrix_check
from stgq.kantor import suzuki_tits_family, verify_stgq_family


def main():
    K = suzuki_tits_family(8)
    G = K.group
    print(f"{G.name}: order {G.order}, type ({K.s},{K.t}), STGQ {bool(verify_stgq_family(K))}")
    m = suzuki_tits_matrix_check(G, samples=10**5)
    print(f"matrix model agrees on {m['checked']} triples: {m['verdict']}")
    Ainf = K.Fstar[K.labels.index("inf")]
    A1 = K.Fstar[K.labels.index("1")]
    print(f"A*(inf): elementary abelian {Ainf.is_elementary_abelian()}, normal {Ainf.is_normal()}")
    print(f"A*(1): abelian {A1.is_abelian()}, exponent {A1.exponent()}, normal {A1.is_normal()}")
    D = derived_subgroup(G)
    print(f"[G,G] has order {D.order}; inside A*(inf): {D.issubset(Ainf)}")
    star = property_star_family(K)
    print("(*):", star.verdict, star.witnesses[0])
    print("ab1 agreement:", ab1_equivalence(G, K.S, star).verdict)
    r = mstgq1_family_sampled(K)
    print("sampled root group orders:", r.parameters["root_group_orders"])


if __name__ == "__main__":
    main()
