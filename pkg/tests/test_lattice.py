import pytest
from hypothesis import given
from hypothesis import strategies as st

from exotic4 import lattice as lat
from exotic4.lattice import (
    HomClass,
    ImmersedSphere,
    Lattice,
    LatticeError,
    NotAChain,
    pairing,
)
from exotic4.rbd import CpqLabel, cpq_chain


def k3_like(k=16):
    """S, Sigma0..Sigma{k-1} (a cyclic -2 chain), S meeting Sigma0 once."""
    labels = ["S"] + [f"Sigma{i}" for i in range(k)]
    squares = {l: -2 for l in labels}
    pairs = {("S", "Sigma0"): 1}
    for i in range(k):
        pairs[(f"Sigma{i}", f"Sigma{(i + 1) % k}")] = 1
    return Lattice.from_pairings(labels, squares, pairs)


def fiber(L):
    return sum((L.basis(l) for l in L.labels if l.startswith("Sigma")), L.zero())


# -- lattice and classes ---------------------------------------------------

def test_fiber_class():
    L = k3_like()
    T = fiber(L)
    assert T.square == 0
    assert pairing(T, L.basis("S")) == 1
    for l in L.labels[1:]:
        assert pairing(T, L.basis(l)) == 0


def test_lattice_validation():
    with pytest.raises(LatticeError):
        Lattice(("x", "y"), ((1, 2), (0, 1)))
    with pytest.raises(LatticeError):
        Lattice(("x", "x"), ((1, 0), (0, 1)))
    with pytest.raises(LatticeError):
        Lattice(("x",), ((1, 0),))


def test_extend_and_lift():
    L = k3_like(4)
    M = L.extend("E1")
    assert M.extends(L) and not L.extends(M)
    s = L.basis("S")
    e = M.basis("E1")
    assert (s + e).square == -3
    assert pairing(s, e) == 0
    assert M.next_label() == "E2"
    with pytest.raises(LatticeError):
        M.extend("E1")


def test_unrelated_lattices_refuse_to_mix():
    a = Lattice.from_pairings(["x"], {"x": 1})
    b = Lattice.from_pairings(["y"], {"y": 1})
    with pytest.raises(LatticeError):
        pairing(a.basis("x"), b.basis("y"))


def test_class_str():
    L = k3_like(2)
    assert str(L.element({"S": 1, "Sigma1": -2})) == "S - 2Sigma1"
    assert str(L.zero()) == "0"


def test_hyperbolic_plane_determinant():
    H = Lattice.from_pairings(["u", "v"], {"u": 0, "v": 0}, {("u", "v"): 1})
    assert H.determinant() == -1


small = st.integers(-5, 5)


@given(st.lists(small, min_size=6, max_size=6), st.lists(small, min_size=6, max_size=6),
       st.lists(small, min_size=6, max_size=6), small)
def test_pairing_bilinear_symmetric(x, y, z, k):
    L = k3_like(5)
    X, Y, Z = (HomClass(L, tuple(v)) for v in (x, y, z))
    assert pairing(X, Y) == pairing(Y, X)
    assert pairing(X + Y, Z) == pairing(X, Z) + pairing(Y, Z)
    assert pairing(k * X, Y) == k * pairing(X, Y)


@given(st.lists(small, min_size=6, max_size=6))
def test_lift_preserves_pairings(x):
    L = k3_like(5)
    M = L.extend("E1").extend("E2")
    X = HomClass(L, tuple(x))
    assert X.lift(M).square == X.square
    assert pairing(X.lift(M), M.basis("E2")) == 0


# -- sphere calculus -------------------------------------------------------

def pseudo_section_config():
    L = k3_like().extend("F1", 0).extend("F6", 0)
    # F1, F6 stand in for fishtail fibers; both carry the fiber class T
    T = fiber(L)
    S = ImmersedSphere(L.basis("S"), 3, "S")
    F1 = ImmersedSphere(T, 1, "F1")
    F6 = ImmersedSphere(T, 1, "F6")
    return L, T, S, F1, F6


def test_resolve_two_fishtails():
    L, T, S, F1, F6 = pseudo_section_config()
    s1 = lat.resolve_spheres(S, F1, 1)
    assert (s1.square, s1.double_points) == (0, 4)
    s2 = lat.resolve_spheres(s1, F6, 1)
    assert (s2.square, s2.double_points) == (2, 5)
    assert s2.cls == L.basis("S") + 2 * T


def test_resolve_checks_algebraic_count():
    _, _, S, F1, _ = pseudo_section_config()
    with pytest.raises(LatticeError):
        lat.resolve_spheres(S, F1, 2)
    with pytest.raises(LatticeError):
        lat.resolve_spheres(S, F1, 0)


def test_blow_up_double_points_to_minus_18():
    L, T, S, F1, F6 = pseudo_section_config()
    s = lat.resolve_spheres(lat.resolve_spheres(S, F1, 1), F6, 1)
    for k in range(5):
        s = lat.blow_up_double_point(s, f"E{k + 1}")
    assert s.square == -18 and s.embedded
    M = s.cls.lattice
    probe = 6 * T.lift(M) + M.element({f"E{k}": 1 for k in range(1, 6)})
    assert pairing(s.cls, probe) == 16
    assert s.cls == (L.basis("S") + 2 * T).lift(M) - 2 * M.element({f"E{k}": 1 for k in range(1, 6)})
    with pytest.raises(LatticeError):
        lat.blow_up_double_point(s)


def test_blow_up_fishtail_gives_minus_4():
    L = Lattice.from_pairings(["T"], {"T": 0})
    f = lat.blow_up_double_point(ImmersedSphere(L.basis("T"), 1, "F"))
    assert f.square == -4 and f.embedded


def test_blow_up_at_intersection():
    L = k3_like(4)
    config = tuple(ImmersedSphere(L.basis(l), 0, l) for l in L.labels)
    cfg, e = lat.blow_up_at_intersection(config, 1, 2)
    assert e.square == -1 and e.name == "E1"
    q = lat.pairing_matrix(cfg)
    assert q[1][1] == q[2][2] == -3
    assert q[1][2] == 0
    assert q[1][5] == q[2][5] == 1
    with pytest.raises(LatticeError):
        lat.blow_up_at_intersection(cfg, 1, 2)  # no longer meet
    with pytest.raises(IndexError):
        lat.blow_up_at_intersection(cfg, 1, 1)


def test_blow_up_at_intersection_rejects_immersed():
    L = Lattice.from_pairings(["x", "y"], {"x": 0, "y": 0}, {("x", "y"): 1})
    cfg = (ImmersedSphere(L.basis("x"), 1), ImmersedSphere(L.basis("y")))
    with pytest.raises(LatticeError):
        lat.blow_up_at_intersection(cfg, 0, 1)


def test_blow_up_preserves_determinant_sign_flip():
    L = k3_like(4)
    config = tuple(ImmersedSphere(L.basis(l), 0, l) for l in L.labels)
    cfg, _ = lat.blow_up_at_intersection(config, 0, 1)
    M = lat.config_lattice(cfg)
    assert M.determinant() == -L.determinant()


# -- chains ----------------------------------------------------------------

def minus18_config():
    """S of square -18 meeting Sigma0 once, plus the 16-cycle."""
    L = k3_like()
    T = fiber(L)
    M = L
    for k in range(1, 6):
        M = M.extend(f"E{k}")
    s = (L.basis("S") + 2 * T).lift(M) - 2 * M.element({f"E{k}": 1 for k in range(1, 6)})
    config = [ImmersedSphere(s, 0, "S")]
    config += [ImmersedSphere(M.basis(f"Sigma{i}"), 0, f"Sigma{i}") for i in range(16)]
    return tuple(config)


def test_extract_c16_chain():
    cfg = minus18_config()
    chain = lat.extract_linear_chain(cfg, list(range(15)))
    assert chain == cpq_chain(CpqLabel(16, 1))


def test_extract_rejects_non_chain():
    cfg = minus18_config()
    with pytest.raises(NotAChain):
        lat.extract_linear_chain(cfg, [0, 2])  # S does not meet Sigma1
    with pytest.raises(NotAChain):
        lat.extract_linear_chain(cfg, list(range(17)))  # closes the cycle
    with pytest.raises(NotAChain):
        lat.extract_linear_chain(cfg, [])
    with pytest.raises(NotAChain):
        lat.extract_linear_chain(cfg, [1, 1])


def test_find_linear_chain():
    cfg = minus18_config()
    target = [-18] + [-2] * 14
    path = lat.find_linear_chain(cfg, 0, target)
    assert path is not None and len(path) == 15 and path[0] == 0
    assert list(lat.extract_linear_chain(cfg, path).coefficients) == target
    assert lat.find_linear_chain(cfg, 0, [-18] + [-2] * 17) is None


def test_infinitely_close_blow_ups():
    cfg = minus18_config()
    out, created = lat.infinitely_close_blow_ups(cfg, 1, 2, [1, 1])
    q = lat.pairing_matrix(out)
    assert len(created) == 3
    assert q[1][1] == -5  # Sigma0 blown up three times
    assert q[2][2] == -3
    # E1 -> -2 after the next blow-up, E2 -> -2, E3 stays -1
    assert [q[k][k] for k in range(17, 20)] == [-2, -2, -1]
    with pytest.raises(LatticeError):
        lat.infinitely_close_blow_ups(cfg, 1, 2, [5])


def test_search_finds_c305_17():
    cfg = minus18_config()
    target = list(cpq_chain(CpqLabel(305, 17)).coefficients)
    hits = lat.search_infinitely_close(cfg, 1, 2, 17, 0, target)
    assert len(hits) == 1
    follow, path = hits[0]
    assert follow == [1] * 16
    out, _ = lat.infinitely_close_blow_ups(cfg, 1, 2, follow)
    assert list(lat.extract_linear_chain(out, path).coefficients) == target


def test_json_round_trip():
    cfg = minus18_config()
    back = lat.config_from_json(lat.config_to_json(cfg))
    assert [s.cls.coords for s in back] == [s.cls.lift(lat.config_lattice(cfg)).coords for s in cfg]
    assert [s.name for s in back] == [s.name for s in cfg]
    assert lat.pairing_matrix(back) == lat.pairing_matrix(cfg)
