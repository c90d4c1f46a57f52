import random

import numpy as np
import pytest

from levelpulse import (
    Permutation,
    PulseSequence,
    QUADRUPOLAR_CHAIN,
    SPIN_HALF_HYPERCUBE,
    SynthesisError,
    build_topology,
    builtin_operation,
    compose,
    conventional_labeling,
    fixed_scheme,
    gray_labeling,
    maximal_sets,
    ols_quadrupolar,
    parse_pulse_program,
    pulse_count_report,
    relabel_pairswap_spin_half,
    relabel_parallel_spin_half,
    schedule_rounds,
    sequence_unitary,
    serialize_pulse_program,
    synthesize_fixed_labeling,
    synthesize_on_path,
    synthesize_scheme,
    verify_permutation,
)

# product operator of the three pulses cycling a 4-state chain, written in
# ascending label order of the subspace
CYCLE4_MATRIX = np.array(
    [
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [0, -1, 0, 0],
        [1, 0, 0, 0],
    ],
    dtype=complex,
)


def random_permutation(n_qubits, rng):
    m = list(range(1 << n_qubits))
    rng.shuffle(m)
    return Permutation(n_qubits, tuple(m))


def label_subspace(u, labeling, labels):
    rows = [labeling.level_of(x) for x in labels]
    return u[np.ix_(rows, rows)]


def test_on_path_emits_reverse_chain_order(full_adder):
    d = maximal_sets(full_adder)
    t = build_topology(QUADRUPOLAR_CHAIN, 4)
    scheme = ols_quadrupolar(d, t)
    mset = d.sets[4]
    pulses = synthesize_on_path(mset, scheme.placements[4].levels, t, scheme.labeling)
    assert [p.levels for p in pulses] == [(2, 3), (1, 2), (0, 1)]


def test_on_path_product_matches_cycle_matrix(full_adder):
    d = maximal_sets(full_adder)
    t = build_topology(QUADRUPOLAR_CHAIN, 4)
    scheme = ols_quadrupolar(d, t)
    pulses = synthesize_on_path(d.sets[4], scheme.placements[4].levels, t, scheme.labeling)
    u = sequence_unitary(pulses, 16)
    sub = label_subspace(u, scheme.labeling, [0b0100, 0b0101, 0b0110, 0b0111])
    assert np.array_equal(sub, CYCLE4_MATRIX)


def test_on_path_two_element_set(full_adder):
    d = maximal_sets(full_adder)
    t = build_topology(QUADRUPOLAR_CHAIN, 4)
    scheme = ols_quadrupolar(d, t)
    pulses = synthesize_on_path(d.sets[6], scheme.placements[6].levels, t, scheme.labeling)
    assert len(pulses) == 1


def test_on_path_second_cycle_population_action(full_adder):
    # the second 4-cycle moves populations 1000 -> 1010 -> 1001 -> 1011 -> 1000
    d = maximal_sets(full_adder)
    t = build_topology(QUADRUPOLAR_CHAIN, 4)
    scheme = ols_quadrupolar(d, t)
    pulses = synthesize_on_path(d.sets[5], scheme.placements[5].levels, t, scheme.labeling)
    u = sequence_unitary(pulses, 16)
    lab = scheme.labeling
    for src, dst in [(0b1000, 0b1010), (0b1010, 0b1001), (0b1001, 0b1011), (0b1011, 0b1000)]:
        row = lab.level_of(src)
        col = int(np.argmax(np.abs(u[row])))
        assert col == lab.level_of(dst)


def test_on_path_rejects_non_path(full_adder):
    d = maximal_sets(full_adder)
    t = build_topology(QUADRUPOLAR_CHAIN, 4)
    scheme = ols_quadrupolar(d, t)
    with pytest.raises(ValueError, match="path"):
        synthesize_on_path(d.sets[4], (0, 2, 4, 6), t, scheme.labeling)
    with pytest.raises(ValueError, match="length"):
        synthesize_on_path(d.sets[4], (0, 1, 2), t, scheme.labeling)


def test_fixed_labeling_chain_counts(full_adder):
    t = build_topology(QUADRUPOLAR_CHAIN, 4)
    cl = fixed_scheme(conventional_labeling(t), "conventional")
    gray = fixed_scheme(gray_labeling(t), "gray")
    assert len(synthesize_fixed_labeling(full_adder, cl, t)) == 12
    assert len(synthesize_fixed_labeling(full_adder, gray, t)) == 12
    q = compose(full_adder, builtin_operation("swap:2,4", 4))
    assert len(synthesize_fixed_labeling(q, cl, t)) == 24
    assert len(synthesize_fixed_labeling(q, gray, t)) == 28


def test_fixed_labeling_hypercube_adder(full_adder):
    t = build_topology(SPIN_HALF_HYPERCUBE, 4)
    cl = fixed_scheme(conventional_labeling(t), "conventional")
    seq = synthesize_fixed_labeling(full_adder, cl, t)
    assert len(seq) == 8
    # first cycle is realized by the outer pulses then the bridging one
    first = [p.levels for p in seq.pulses[:3]]
    assert sorted(first) == [(4, 5), (4, 6), (5, 7)]
    u = sequence_unitary(seq.pulses[:3], 16)
    sub = label_subspace(u, cl.labeling, [0b0100, 0b0101, 0b0110, 0b0111])
    assert np.array_equal(sub, CYCLE4_MATRIX)


def test_reordered_factorization_same_operator():
    # on the square, the chain product equals the reordered bridge product
    t = build_topology(SPIN_HALF_HYPERCUBE, 2)
    lab = conventional_labeling(t)
    scheme = fixed_scheme(lab, "conventional")
    chain_track = [(1, 3), (1, 2), (0, 2)]
    u_chain = sequence_unitary(chain_track, 4)
    reordered = [(1, 3), (0, 2), (0, 1)]
    u_re = sequence_unitary(reordered, 4)
    assert np.array_equal(u_chain, u_re)
    assert np.array_equal(u_re, CYCLE4_MATRIX)
    p = Permutation(2, (2, 3, 1, 0))
    assert verify_permutation(u_re, p, scheme).passed


def test_chain_fixed_labeling_length_is_inversion_count():
    # independent oracle: number of inversions of the induced level map
    rng = random.Random(55)
    for n in (2, 3, 4):
        t = build_topology(QUADRUPOLAR_CHAIN, n)
        for labeling, name in (
            (conventional_labeling(t), "conventional"),
            (gray_labeling(t), "gray"),
        ):
            scheme = fixed_scheme(labeling, name)
            for _ in range(20):
                p = random_permutation(n, rng)
                sigma = [
                    labeling.level_of(p(labeling.label_of(lv)))
                    for lv in range(p.size)
                ]
                inversions = sum(
                    1
                    for i in range(len(sigma))
                    for j in range(i + 1, len(sigma))
                    if sigma[i] > sigma[j]
                )
                seq = synthesize_fixed_labeling(p, scheme, t)
                assert len(seq) == inversions


def test_fixed_labeling_verifies_random_tables():
    rng = random.Random(31)
    for n in (2, 3):
        for kind in (QUADRUPOLAR_CHAIN, SPIN_HALF_HYPERCUBE):
            t = build_topology(kind, n)
            scheme = fixed_scheme(conventional_labeling(t), "conventional")
            for _ in range(40):
                p = random_permutation(n, rng)
                seq = synthesize_fixed_labeling(p, scheme, t)
                for pulse in seq.pulses:
                    assert t.is_edge(*pulse.levels)
                assert verify_permutation(sequence_unitary(seq), p, scheme).passed


def test_fixed_labeling_depth_cap(full_adder):
    # a bare transposition of antipodal levels needs transit pulses; a tiny
    # cap must fail loudly rather than emit a wrong program
    mapping = list(range(16))
    mapping[0], mapping[15] = 15, 0
    p = Permutation(4, tuple(mapping))
    t = build_topology(SPIN_HALF_HYPERCUBE, 4)
    scheme = fixed_scheme(conventional_labeling(t), "conventional")
    with pytest.raises(SynthesisError, match="routing failed"):
        synthesize_fixed_labeling(p, scheme, t, depth_cap=3)
    seq = synthesize_fixed_labeling(p, scheme, t, depth_cap=7)
    assert len(seq) == 7
    assert verify_permutation(sequence_unitary(seq), p, scheme).passed


def test_schedule_single_pulse(full_adder):
    d = maximal_sets(full_adder)
    t = build_topology(QUADRUPOLAR_CHAIN, 4)
    scheme = ols_quadrupolar(d, t)
    pulses = synthesize_on_path(d.sets[6], scheme.placements[6].levels, t, scheme.labeling)
    single = schedule_rounds(PulseSequence(4, tuple(pulses), (1,) * len(pulses)))
    assert single.rounds == (1,)


def test_schedule_chain_triple_needs_three_rounds(full_adder):
    d = maximal_sets(full_adder)
    t = build_topology(QUADRUPOLAR_CHAIN, 4)
    scheme = ols_quadrupolar(d, t)
    pulses = synthesize_on_path(d.sets[4], scheme.placements[4].levels, t, scheme.labeling)
    seq = PulseSequence(4, tuple(pulses), (1,) * 3)
    assert schedule_rounds(seq).rounds == (1, 1, 1)


def test_schedule_parallel_adder_rounds(full_adder):
    d = maximal_sets(full_adder)
    t = build_topology(SPIN_HALF_HYPERCUBE, 4)
    scheme = relabel_parallel_spin_half(d, t)
    seq = synthesize_scheme(d, scheme, t)
    scheduled = schedule_rounds(seq)
    assert scheduled.rounds == (6, 2)
    assert np.array_equal(sequence_unitary(seq), sequence_unitary(scheduled))


def test_schedule_preserves_operator_random():
    rng = random.Random(77)
    for n in (2, 3):
        t = build_topology(SPIN_HALF_HYPERCUBE, n)
        for _ in range(25):
            p = random_permutation(n, rng)
            d = maximal_sets(p)
            scheme = relabel_pairswap_spin_half(d, t)
            seq = synthesize_scheme(d, scheme, t)
            scheduled = schedule_rounds(seq)
            assert np.array_equal(sequence_unitary(seq), sequence_unitary(scheduled))
            flat_levels = sorted(p.levels for p in scheduled.pulses)
            assert flat_levels == sorted(p.levels for p in seq.pulses)


def test_report_adder_chain(full_adder):
    t = build_topology(QUADRUPOLAR_CHAIN, 4)
    rep = pulse_count_report(full_adder, t)
    assert rep.counts["ols"] == 8
    assert rep.counts["cl"] == 12
    assert rep.counts["gray"] == 12
    assert any("gray" in note and "10" in note for note in rep.notes)


def test_report_composed_chain(full_adder):
    t = build_topology(QUADRUPOLAR_CHAIN, 4)
    q = compose(full_adder, builtin_operation("swap:2,4", 4))
    rep = pulse_count_report(q, t)
    assert rep.counts == {"ols": 12, "cl": 24, "gray": 28}
    assert any("gray" in note and "26" in note for note in rep.notes)
    r = compose(builtin_operation("swap:2,4", 4), full_adder)
    assert pulse_count_report(r, t).counts["ols"] == 12


def test_report_identity_zeroes():
    t = build_topology(QUADRUPOLAR_CHAIN, 4)
    rep = pulse_count_report(Permutation.identity(4), t)
    assert set(rep.counts.values()) == {0}
    assert rep.notes == ()


def test_report_hypercube(full_adder):
    t = build_topology(SPIN_HALF_HYPERCUBE, 4)
    rep = pulse_count_report(full_adder, t)
    assert rep.counts == {"pairswap": 8, "parallel": 8, "cl": 8}
    assert rep.rounds["parallel"] == 2


def test_pulse_program_round_trip(full_adder):
    d = maximal_sets(full_adder)
    t = build_topology(SPIN_HALF_HYPERCUBE, 4)
    scheme = relabel_parallel_spin_half(d, t)
    seq = schedule_rounds(synthesize_scheme(d, scheme, t))
    text = serialize_pulse_program(seq)
    parsed = parse_pulse_program(text, t, scheme.labeling)
    assert parsed == seq
    # serialization is deterministic
    assert serialize_pulse_program(parsed) == text


@pytest.mark.parametrize(
    "text",
    [
        "1  pi_x  0  1  # bad axis",
        "not a pulse line",
        "2  pi_y  0  1",
        "1  pi_y  0  3",
    ],
)
def test_pulse_program_parse_errors(text):
    t = build_topology(SPIN_HALF_HYPERCUBE, 2)
    lab = conventional_labeling(t)
    with pytest.raises(ValueError):
        parse_pulse_program(text, t, lab)
