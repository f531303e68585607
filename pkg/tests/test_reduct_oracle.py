"""Brute-force cross-check of the reduct computation.

The oracle below re-derives the clique reduct with plain set arithmetic:
candidate members are relation suffixes (forced by the exact-relation
condition), families are enumerated as raw subsets, the witness search scans
every possible witness tuple, and bounded self-sufficiency enumerates every
superset within the size allowance.  No prefix grouping, no level-by-level
closure, no search-space restrictions shared with the implementation.
"""

import itertools
import random

from pregeom import (ClassParams, NaryStructure, clique_certificate, in_class,
                     reduct_of)
from pregeom.gen import random_nary, random_nary_in_class

from oracles import naive_predim


def naive_phi(m, members):
    """Plain evaluation of the defining formula; returns the witness set."""
    s, r = m.params.s, m.params.r
    members = [tuple(t) for t in members]
    if len(set(members)) != len(members):
        return []
    member_elems = {e for t in members for e in t}
    witnesses = []
    for witness in itertools.permutations(sorted(m.universe), s - 1):
        if any(e in member_elems for e in witness):
            continue
        x = frozenset(member_elems | set(witness))
        inside = {t for t in m.relation if set(t) <= x}
        if inside != {witness + t for t in members}:
            continue
        ok = True
        rest = sorted(m.universe - x)
        for k in range(1, s + 1):
            for extra in itertools.combinations(rest, k):
                if naive_predim(m, x | set(extra)) < naive_predim(m, x):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            witnesses.append(witness)
    return witnesses


def naive_reduct_cliques(m):
    s = m.params.s
    suffixes = sorted({t[s - 1:] for t in m.relation})
    cliques = []
    for size in range(s, len(suffixes) + 1):
        for family in itertools.combinations(suffixes, size):
            good = True
            for k in range(s, size + 1):
                for sub in itertools.combinations(family, k):
                    if not naive_phi(m, sub):
                        good = False
                        break
                if not good:
                    break
            if good:
                cliques.append(frozenset(family))
    return frozenset(k for k in cliques if not any(k < o for o in cliques))


P31 = ClassParams(3, 1)
P32 = ClassParams(3, 2)


def test_oracle_agrees_on_the_planted_example():
    m = NaryStructure.of(P31, range(5), [(3, 4, 0), (3, 4, 1), (3, 4, 2)])
    assert naive_reduct_cliques(m) == reduct_of(m).maxcliques


def test_oracle_agreement_random_r1():
    rng = random.Random(51)
    interesting = 0
    for _ in range(120):
        m = random_nary(rng, P31, 6, max_relations=5)
        if rng.random() < 0.5 and len(m.universe) >= 5:
            elems = sorted(m.universe)
            y1, y2, *rest = rng.sample(elems, 5)
            planted = {(y1, y2, x) for x in rest}
            m = NaryStructure.of(P31, m.universe, m.relation | planted)
        expect = naive_reduct_cliques(m)
        assert reduct_of(m).maxcliques == expect
        interesting += bool(expect)
    # noise usually kills the planted family on both sides alike; the
    # noise-free planted test below guarantees the nonempty case
    assert interesting >= 1


def test_oracle_agreement_planted_r1():
    # plant shared-prefix families of varying size, then add noise
    rng = random.Random(52)
    interesting = 0
    for _ in range(60):
        k = rng.randint(3, 4)
        rel = [(5, 6, i) for i in range(k)]
        noise = random_nary(rng, P31, 5, max_relations=2)
        m = NaryStructure.of(P31, set(range(k)) | {5, 6} | noise.universe,
                             rel + sorted(noise.relation))
        expect = naive_reduct_cliques(m)
        assert reduct_of(m).maxcliques == expect
        interesting += bool(expect)
    assert interesting >= 30


def test_oracle_agreement_r2():
    # members are 2-tuples, witnesses single elements
    rng = random.Random(53)
    interesting = 0
    for _ in range(80):
        m = random_nary(rng, P32, 6, max_relations=4)
        if rng.random() < 0.5 and len(m.universe) >= 5:
            y, a, b, c, d = rng.sample(sorted(m.universe), 5)
            m = NaryStructure.of(P32, m.universe,
                                 m.relation | {(y, a, b), (y, c, d)})
        expect = naive_reduct_cliques(m)
        assert reduct_of(m).maxcliques == expect
        interesting += bool(expect)
    assert interesting >= 3


def test_certificate_agrees_with_naive_witnesses():
    rng = random.Random(54)
    for _ in range(60):
        m = random_nary_in_class(rng, P31, 6)
        suffixes = sorted({t[2:] for t in m.relation})
        for members in itertools.combinations(suffixes, 3):
            expect = naive_phi(m, members)
            got = clique_certificate(m, members)
            assert (got is not None) == bool(expect)
            if got is not None:
                assert [got.witness] == expect


def test_r2_planted_pair_clique():
    # two disjoint 2-tuples sharing a single witness element
    m = NaryStructure.of(P32, range(5), [(4, 0, 1), (4, 2, 3)])
    r = reduct_of(m)
    assert r.maxcliques == frozenset({frozenset({(0, 1), (2, 3)})})
    assert naive_reduct_cliques(m) == r.maxcliques


def test_s4_params_bigger_witness():
    # r=1, s=4: witnesses are 3-tuples, cliques need at least four members
    p41 = ClassParams(4, 1)
    m = NaryStructure.of(p41, range(7),
                         [(4, 5, 6, 0), (4, 5, 6, 1), (4, 5, 6, 2), (4, 5, 6, 3)])
    assert in_class(m)
    r = reduct_of(m)
    assert r.maxcliques == frozenset({frozenset({(0,), (1,), (2,), (3,)})})
    cert = clique_certificate(m, [(0,), (1,), (2,), (3,)])
    assert cert.witness == (4, 5, 6)
    # a three-member subfamily is below the threshold
    import pytest
    with pytest.raises(Exception):
        clique_certificate(m, [(0,), (1,), (2,)])
