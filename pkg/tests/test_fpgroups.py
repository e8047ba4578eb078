import json

import pytest
from hypothesis import given, strategies as st

from pfq.fpgroups import (CorpusParseError, CorpusValidationError, Presentation,
                          cyclically_reduce, exponent_sum_matrix, free_reduce, inverse_word,
                          parse_corpus, serialize_corpus, word_from_letters, word_to_letters)

letters = st.integers(1, 3).flatmap(lambda g: st.sampled_from([g, -g]))
words = st.lists(letters, max_size=30).map(tuple)


def test_parse_t05599_line():
    (P,) = parse_corpus('{"name":"t05599","gens":3,"relators":["aabbbbbaabbCC","aaaaacccBB"]}')
    assert P.ngens == 3
    assert [len(r) for r in P.relators] == [13, 10]
    assert P.relators[0][:3] == (1, 1, 2)
    assert P.relators[0][-1] == -3


def test_parse_free_group():
    (P,) = parse_corpus('{"name":"F2","gens":2,"relators":[]}')
    assert P.ngens == 2 and P.relators == ()


def test_parse_drops_relator_reducing_to_empty():
    (P,) = parse_corpus('{"name":"x","gens":1,"relators":["aA"]}')
    assert P.relators == ()


def test_parse_keeps_order_and_skips_blank_lines():
    text = '{"name":"b","gens":1,"relators":["a"]}\n\n{"name":"a","gens":1,"relators":[]}\n'
    assert [P.name for P in parse_corpus(text)] == ["b", "a"]


def test_volume_is_metadata():
    (P,) = parse_corpus('{"name":"v","gens":1,"relators":[],"volume":2.5}')
    assert P.volume == 2.5


@pytest.mark.parametrize("line, lineno", [
    ('{"name":"a","gens":1,"relators":[]}\nnot json', 2),
    ('{"gens":1,"relators":[]}', 1),
    ('{"name":"a","gens":"2","relators":[]}', 1),
    ('{"name":"a","gens":1,"relators":["a1"]}', 1),
    ('[1,2]', 1),
])
def test_parse_errors_carry_line_numbers(line, lineno):
    with pytest.raises(CorpusParseError) as err:
        parse_corpus(line)
    assert err.value.line == lineno


def test_letter_beyond_ngens_is_validation_error():
    with pytest.raises(CorpusValidationError) as err:
        parse_corpus('{"name":"a","gens":2,"relators":["abc"]}')
    assert err.value.line == 1


def test_duplicate_names_rejected():
    line = '{"name":"a","gens":1,"relators":[]}'
    with pytest.raises(CorpusValidationError) as err:
        parse_corpus(line + "\n" + line)
    assert err.value.line == 2


def test_nonpositive_volume_rejected():
    with pytest.raises(CorpusValidationError):
        parse_corpus('{"name":"a","gens":1,"relators":[],"volume":0}')


@pytest.mark.parametrize("w, expected", [
    ((1, -1), ()),
    ((1, 2, -2, -1, 3), (3,)),
    ((1, 1, 2), (1, 1, 2)),
])
def test_free_reduce_examples(w, expected):
    assert free_reduce(w) == expected


@given(words)
def test_free_reduce_idempotent_and_shrinking(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert len(r) <= len(w)
    assert all(a != -b for a, b in zip(r, r[1:]))


@given(words)
def test_inverse_word_cancels(w):
    assert free_reduce(w + inverse_word(w)) == ()


def test_letter_encoding_round_trip():
    assert word_from_letters("aBc") == (1, -2, 3)
    assert word_to_letters((1, -2, 3)) == "aBc"
    assert word_from_letters("zZ") == (26, -26)


def test_exponent_sum_examples(t05599):
    assert exponent_sum_matrix(Presentation("F2", 2, ())).rows == 0
    assert exponent_sum_matrix(Presentation("F2", 2, ())).cols == 2
    assert exponent_sum_matrix(Presentation.from_letters("c3", 1, ["aaa"])).to_dense() == [[3]]
    assert exponent_sum_matrix(t05599).to_dense() == [[4, 7, -2], [5, -2, 3]]


presentations = st.builds(
    lambda rels: Presentation("p", 3, tuple(rels)),
    st.lists(words, max_size=4),
)


@given(presentations)
def test_serialize_round_trip(P):
    assert parse_corpus(serialize_corpus([P])) == [P]


@given(presentations, st.data())
def test_exponent_sums_invariant_under_rotation(P, data):
    rotated = []
    for r in P.relators:
        k = data.draw(st.integers(0, len(r)))
        rotated.append(r[k:] + r[:k])
    Q = Presentation("q", 3, tuple(rotated))
    assert exponent_sum_matrix(Q) == exponent_sum_matrix(P)


def test_cyclically_reduce():
    assert cyclically_reduce((1, 2, 3, -1)) == (2, 3)
    assert cyclically_reduce((1, -1)) == ()


def test_to_json_uses_letters(t05599):
    assert json.loads(json.dumps(t05599.to_json()))["relators"][1] == "aaaaacccBB"
