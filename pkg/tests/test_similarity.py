"""Characteristic vectors and the normalized distance."""

import math
import random

import pytest

from blockoff.frontend import KIND_COUNT, NodeKind, parse
from blockoff.frontend.nodes import AstNode
from blockoff.similarity import (
    CharacteristicVector,
    MIN_TOKEN_MASS,
    similarity,
    vectorize,
)

from helpers import ProgramGen, scramble


def vec(**counts):
    slots = [0] * KIND_COUNT
    for kind_name, value in counts.items():
        slots[int(NodeKind[kind_name])] = value
    return CharacteristicVector(tuple(slots))


def brute_force_counts(node):
    """Independent oracle: count kinds by explicit stack traversal."""
    counts = [0] * KIND_COUNT
    stack = [node]
    while stack:
        n = stack.pop()
        counts[int(n.kind)] += 1
        stack.extend(n.children)
    return tuple(counts)


def test_single_identifier_leaf():
    leaf = AstNode(NodeKind.IDENTIFIER, 0, 1, [], "x")
    v = vectorize(leaf)
    assert v.counts[int(NodeKind.IDENTIFIER)] == 1
    assert v.token_mass == 1


def test_vectorize_matches_brute_force_on_random_programs():
    rng = random.Random(99)
    for _ in range(25):
        unit = parse("gen.c", ProgramGen(rng).program())
        assert vectorize(unit.root).counts == brute_force_counts(unit.root)


def test_rename_does_not_move_the_vector():
    rng = random.Random(7)
    for _ in range(25):
        text = ProgramGen(rng).program()
        assert (vectorize(parse("a.c", text).root)
                == vectorize(parse("b.c", scramble(text, rng)).root))


def test_fixture_clone_has_reference_vector(corpus_units, fixture_db):
    record = next(r for r in fixture_db if r.id == "fft2d")
    ref_unit = parse("ref.c", record.comparison_code.read_text())
    ref_body = next(n for n in ref_unit.root.walk()
                    if n.kind is NodeKind.FUNCTION_DEF).children[-1]
    clone = next(n for n in corpus_units["fft_copied.c"].root.walk()
                 if n.kind is NodeKind.FUNCTION_DEF and n.name == "spectrum_pass")
    assert vectorize(clone.children[-1]) == vectorize(ref_body)


def test_similarity_identity():
    for v in [vec(IDENTIFIER=3, CALL_EXPR=1), vec(FOR_STMT=2), vec()]:
        assert similarity(v, v) == 1.0


def test_similarity_orthogonal_unit_vectors():
    u = vec(IDENTIFIER=1)
    v = vec(LITERAL=1)
    expected = 1.0 - math.sqrt(2.0) / 2.0  # closed form
    assert similarity(u, v) == pytest.approx(expected)
    assert similarity(u, v) == pytest.approx(0.29289, abs=1e-5)


def test_two_zero_vectors_count_as_identical():
    assert similarity(vec(), vec()) == 1.0


def test_one_is_reached_only_by_equal_vectors():
    u = vec(IDENTIFIER=2, LITERAL=1)
    v = vec(IDENTIFIER=2, LITERAL=2)
    assert similarity(u, v) < 1.0


def test_symmetry_on_random_vectors():
    rng = random.Random(4321)
    for _ in range(500):
        u = CharacteristicVector(
            tuple(rng.randrange(0, 30) for _ in range(KIND_COUNT)))
        v = CharacteristicVector(
            tuple(rng.randrange(0, 30) for _ in range(KIND_COUNT)))
        assert similarity(u, v) == similarity(v, u)
        assert 0.0 <= similarity(u, v) <= 1.0


def test_adding_statements_strictly_lowers_similarity():
    base = vec(EXPR_STMT=5, IDENTIFIER=10, CALL_EXPR=2)
    prev = 1.0
    for extra in (1, 2, 4, 8, 16):
        counts = list(base.counts)
        counts[int(NodeKind.EXPR_STMT)] += extra
        grown = CharacteristicVector(tuple(counts))
        s = similarity(base, grown)
        assert s < prev
        prev = s


def test_vector_shape_validation():
    with pytest.raises(ValueError):
        CharacteristicVector((1, 2, 3))
    with pytest.raises(ValueError):
        CharacteristicVector(tuple([-1] + [0] * (KIND_COUNT - 1)))


def test_minimum_mass_gate_value():
    assert MIN_TOKEN_MASS == 20
