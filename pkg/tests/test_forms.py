import pytest
from hypothesis import given, settings, strategies as st

from riverlink.arith import is_discriminant, pell_minimal
from riverlink.errors import InvalidFormError, InvalidMatrixError
from riverlink.forms import (IDENTITY, S, T, Pibqf, UniModularMatrix, act, automorph, b_delta,
                             class_number, discriminant, form_from_matrix, is_equivalent,
                             is_reciprocal_class, is_reduced, narrow_class_group, path_to_matrix,
                             reciprocal, reduce, reduced_cycle, river_walk, strongly_inequivalent)

from oracles import class_count_by_search

P = Pibqf.parse


# -------- strategies

def _matrices():
    words = st.text(alphabet="LRS", max_size=12)
    return words.map(path_to_matrix)


@st.composite
def forms(draw, max_disc=3000):
    D = draw(st.integers(5, max_disc).filter(is_discriminant))
    classes = narrow_class_group(D)
    q = classes[draw(st.integers(0, len(classes) - 1))]
    return act(draw(_matrices()), q)


# -------- construction

@pytest.mark.parametrize("text, D", [("[1,1,-1]", 5), ("[10,14,-5]", 396), ("[ 1, 2 ,-2 ]", 12)])
def test_discriminant(text, D):
    assert discriminant(P(text)) == D


@pytest.mark.parametrize("args", [(1, 0, -1), (2, 4, 2), (1, 1, 1), (0, 0, 0), (2, 2, -4)])
def test_rejects_non_pibqf(args):
    with pytest.raises(InvalidFormError):
        Pibqf(*args)


@pytest.mark.parametrize("text", ["[1,1]", "1,1,-1", "[a,b,c]", "[1.5,1,-1]"])
def test_parse_rejects_malformed(text):
    with pytest.raises(InvalidFormError):
        P(text)


def test_str_round_trip():
    q = P("[10,14,-5]")
    assert str(q) == "[10,14,-5]" and P(str(q)) == q


def test_matrix_determinant_checked():
    with pytest.raises(InvalidMatrixError):
        UniModularMatrix(1, 1, 1, 1)


def test_matrix_sign_canonical():
    assert UniModularMatrix(-1, 0, 0, -1) == IDENTITY
    assert UniModularMatrix(0, -1, 1, 0) == S


# -------- action

def test_act_examples():
    q = P("[1,1,-1]")
    assert act(IDENTITY, q) == q
    assert act(T, q) == P("[1,3,1]")
    assert act(S, q) == P("[-1,-1,1]")


@settings(max_examples=300, deadline=None)
@given(forms(), _matrices(), _matrices())
def test_act_is_right_action(q, m, n):
    assert act(n, act(m, q)) == act(m @ n, q)
    assert act(m, q).disc == q.disc


def test_b_delta_examples():
    assert b_delta(P("[1,1,-1]"), P("[-3,10,3]")) == -2
    assert b_delta(P("[1,1,-1]"), P("[1,-1,-1]")) == 3


@settings(max_examples=300, deadline=None)
@given(forms(), forms(), _matrices())
def test_b_delta_invariants(q1, q2, m):
    assert b_delta(q1, q1) == q1.disc
    assert b_delta(q1, q2) == b_delta(q2, q1)
    assert b_delta(act(m, q1), act(m, q2)) == b_delta(q1, q2)


def test_reciprocal():
    assert reciprocal(P("[1,1,-1]")) == P("[-1,-1,1]")
    assert reciprocal(P("[10,14,-5]")) == P("[-10,-14,5]")
    assert reciprocal(reciprocal(P("[10,14,-5]"))) == P("[10,14,-5]")


# -------- automorphs

@pytest.mark.parametrize("text, rows", [("[1,1,-1]", [[1, 1], [1, 2]]), ("[1,2,-2]", [[1, 2], [1, 3]])])
def test_automorph_examples(text, rows):
    assert automorph(P(text)).rows() == rows


@pytest.mark.parametrize("n", range(2, 12))
def test_automorph_family(n):
    assert automorph(Pibqf(1, n, -1)).rows() == [[1, n], [n, n * n + 1]]
    assert form_from_matrix(UniModularMatrix(1, n, n, n * n + 1)) == Pibqf(1, n, -1)


def test_form_from_matrix():
    assert form_from_matrix(UniModularMatrix(1, 1, 1, 2)) == P("[1,1,-1]")
    with pytest.raises(InvalidMatrixError):
        form_from_matrix(T)


@settings(max_examples=200, deadline=None)
@given(forms(), _matrices())
def test_automorph_conjugation(q, m):
    assert automorph(act(m, q)) == m.inverse() @ automorph(q) @ m
    assert abs(automorph(q).trace) == pell_minimal(q.disc).t
    assert act(automorph(q), q) == q


# -------- words

def test_path_to_matrix():
    assert path_to_matrix("SRLRR").rows() == [[5, 2], [-3, -1]]
    assert path_to_matrix("") == IDENTITY
    assert path_to_matrix("RL").rows() == [[1, 1], [1, 2]]
    with pytest.raises(ValueError):
        path_to_matrix("RX")


# -------- reduction

@pytest.mark.parametrize("text, ok", [("[1,1,-1]", True), ("[1,3,1]", False), ("[10,14,-5]", True)])
def test_is_reduced(text, ok):
    assert is_reduced(P(text)) is ok


def test_reduce_examples():
    assert reduce(P("[1,1,-1]")) == (P("[1,1,-1]"), IDENTITY)
    r, m = reduce(P("[1,3,1]"))
    assert is_reduced(r) and act(m, P("[1,3,1]")) == r
    assert r in reduced_cycle(P("[1,1,-1]"))


@settings(max_examples=200, deadline=None)
@given(forms())
def test_reduce_witness(q):
    r, m = reduce(q)
    assert is_reduced(r) and act(m, q) == r


def test_reduced_cycles():
    assert reduced_cycle(P("[1,1,-1]")) == [P("[1,1,-1]"), P("[-1,1,1]")]
    cyc = reduced_cycle(P("[1,2,-2]"))
    assert P("[1,2,-2]") in cyc and P("[-1,2,2]") not in cyc
    assert set(cyc) == {P("[1,2,-2]"), P("[-2,2,1]")}
    # [2,2,-1] lies in the class of [-1,2,2], not of [1,2,-2]
    assert is_equivalent(P("[2,2,-1]"), P("[-1,2,2]")) is not None


@settings(max_examples=100, deadline=None)
@given(forms())
def test_reduced_cycle_members_equivalent(q):
    for f in reduced_cycle(q):
        assert is_reduced(f) and is_equivalent(q, f) is not None


# -------- classes

def test_class_groups_examples():
    assert class_number(5) == 1
    assert is_equivalent(narrow_class_group(5)[0], P("[1,1,-1]")) is not None
    listed = [P(t) for t in ("[1,10,-9]", "[-3,10,3]", "[9,10,-1]", "[-5,6,5]")]
    reps = narrow_class_group(136)
    assert len(reps) == 4
    for f in listed:
        assert sum(is_equivalent(f, r) is not None for r in reps) == 1
    reps12 = narrow_class_group(12)
    assert len(reps12) == 2
    for f in (P("[1,2,-2]"), P("[-1,2,2]")):
        assert sum(is_equivalent(f, r) is not None for r in reps12) == 1


def test_class_numbers_match_search():
    for D in range(5, 1001):
        if is_discriminant(D):
            assert class_number(D) == class_count_by_search(D, limit=D), D


def test_negation_permutes_classes():
    for D in (136, 145, 221, 396, 780):
        reps = narrow_class_group(D)
        image = []
        for r in reps:
            hits = [k for k, s in enumerate(reps) if is_equivalent(-r, s) is not None]
            assert len(hits) == 1
            image.append(hits[0])
        assert sorted(image) == list(range(len(reps)))
        assert all(image[image[k]] == k for k in range(len(reps)))


def test_is_equivalent_examples():
    assert is_equivalent(P("[1,1,-1]"), P("[1,3,1]")) == T
    assert is_equivalent(P("[1,1,-1]"), P("[-1,-1,1]")) is not None
    assert is_equivalent(P("[1,2,-2]"), P("[-1,2,2]")) is None
    assert is_equivalent(P("[1,1,-1]"), P("[1,2,-2]")) is None


@settings(max_examples=200, deadline=None)
@given(forms(), _matrices())
def test_is_equivalent_witness(q, m):
    g = act(m, q)
    w = is_equivalent(q, g)
    assert w is not None and act(w, q) == g


def test_reciprocal_classes():
    assert is_reciprocal_class(P("[1,1,-1]"))
    assert not is_reciprocal_class(P("[1,2,-2]"))
    assert not is_reciprocal_class(P("[10,14,-5]"))


def test_strongly_inequivalent():
    assert not strongly_inequivalent(P("[1,2,-2]"), P("[-1,2,2]"))
    assert not strongly_inequivalent(P("[1,1,-1]"), P("[1,3,1]"))
    assert strongly_inequivalent(P("[1,1,-1]"), P("[1,2,-2]"))


def test_river_walk_consistency():
    for q in (P("[10,14,-5]"), P("[1,2,-2]"), P("[7,3,-11]")):
        letters, fs, m = river_walk(q)
        assert act(m, q) == fs[0]
        for t, ch in enumerate(letters):
            nxt = act(path_to_matrix(ch), fs[t])
            assert nxt == fs[(t + 1) % len(fs)]
            assert fs[t].a > 0 > fs[t].c
