import pytest

from stgq import io
from stgq.gq import gq_isomorphic
from stgq.grp import elementary_abelian, group_isomorphic, heisenberg, suzuki_tits_group
from stgq.kantor import verify_kantor_family, verify_stgq_family


def test_geometry_round_trip(w3):
    text = io.dump_geometry(w3, comment="W(3)")
    g = io.load_geometry(text)
    assert (g.n_points, g.n_lines) == (40, 40)
    assert [list(L) for L in g.lines] == [list(L) for L in w3.lines]
    assert g.declared_order == (3, 3)
    assert io.dump_geometry(g, comment="W(3)") == text


def test_group_round_trip_law_and_table():
    for G in (heisenberg(1, 3), suzuki_tits_group(2), elementary_abelian(3, 2)):
        H = io.load_group(io.dump_group(G))
        assert H.order == G.order
        assert group_isomorphic(G, H).verdict is True


def test_group_table_round_trip(wfam3):
    from stgq.grp import group_from_law

    G = group_from_law(6, lambda a, b: (a + b) % 6)
    text = io.dump_group(G)
    assert "table" in text
    H = io.load_group(text)
    assert (H.table == G.table).all()


@pytest.mark.parametrize("name", ["wfam3", "hfam", "st2"])
def test_family_round_trip(name, request):
    K = request.getfixturevalue(name).K
    K2 = io.load_family(io.dump_family(K))
    assert K2.labels == K.labels and (K2.s, K2.t) == (K.s, K.t)
    assert verify_kantor_family(K2.group, K2.F, K2.Fstar, K2.s, K2.t)
    assert verify_stgq_family(K2)


def test_autos_round_trip(wfam3):
    text = io.dump_autos(wfam3.action)
    acts = io.load_autos(text, wfam3.geom)
    assert len(acts) == 27
    assert all((a.points == b.points).all() and (a.lines == b.lines).all() for a, b in zip(acts, wfam3.action))


def test_autos_size_mismatch(wfam3, h34):
    with pytest.raises(io.FormatError):
        io.load_autos(io.dump_autos(wfam3.action), h34)


def test_autos_must_preserve_incidence(wfam3):
    text = io.dump_autos(wfam3.action[:1])
    rows = text.splitlines()
    pts = rows[1].split(":")[1].split()
    pts[1], pts[2] = pts[2], pts[1]
    rows[1] = "p 0: " + " ".join(pts)
    with pytest.raises(io.FormatError):
        io.load_autos("\n".join(rows), wfam3.geom)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "geometry 3 1\nL 0: 0 1 2\n",
        "geom 3\nL 0: 0 1 2\n",
        "geom 3 2\nL 0: 0 1 2\n",
        "geom 3 1\nL 1: 0 1 2\n",
        "geom 3 1\nL 0: 0 1 x\n",
        "geom 3 1\nL 0: 0 1 7\n",
    ],
)
def test_malformed_geometry(text):
    with pytest.raises(io.FormatError):
        io.load_geometry(text)


@pytest.mark.parametrize(
    "text",
    [
        "group 4\n",
        "group 4\nlaw cyclic 4\n",
        "group 27\nlaw heisenberg 1\n",
        "group 9\nlaw heisenberg 1 3\n",
        "group 2\ntable\n0 1\n",
        "group 2\ntable\n1 0\n0 1\n",
        "group 2\ntable\n0 1\n1 1\n",
        "group 2\ntable\n0 1\n1 0\nextra\n",
    ],
)
def test_malformed_group(text):
    with pytest.raises(io.FormatError):
        io.load_group(text)


def test_malformed_family(wfam3):
    good = io.dump_family(wfam3.K)
    with pytest.raises(io.FormatError):
        io.load_family(good.replace("kantor", "family", 1))
    with pytest.raises(io.FormatError):
        io.load_family(good.replace("Astar inf:", "Astar zzz:"))
    with pytest.raises(io.FormatError):
        io.load_family(good + "A extra: 999\n")


def test_comments_ignored():
    g = io.load_geometry("# a comment\ngeom 3 1\n# more\nL 0: 0 1 2\n")
    assert g.n_lines == 1


def test_file_helpers(tmp_path, w3):
    p = tmp_path / "w3.geo"
    io.write_text(p, io.dump_geometry(w3))
    assert gq_isomorphic(io.load_geometry(io.read_text(p)), w3).verdict is True
