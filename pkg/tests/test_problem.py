from fractions import Fraction

import pytest

from mwp_attack import (
    EmptyInput,
    MathWordProblem,
    NoQuestionFound,
    Sentence,
    extract_quantities,
    identify_question,
    reassemble,
    segment_text,
    tokenize,
)
from mwp_attack.problem import normalize_ws

from conftest import DENNIS, FIXTURE_PROBLEMS, TAILOR, TIM_MIKE


class TestSegmentText:
    def test_three_sentences(self):
        sents = segment_text(TIM_MIKE["text"])
        assert [s.text for s in sents] == [
            "Tim has 5 books.",
            "Mike has 7 books.",
            "How many books do they have together?",
        ]

    def test_space_before_terminator(self):
        sents = segment_text(TAILOR["text"])
        assert len(sents) == 2
        assert sents[0].text.endswith("pants .")

    def test_single_sentence(self):
        assert len(segment_text("X.")) == 1

    def test_decimal_not_split(self):
        sents = segment_text("A rope is 1.5 meters long. How long is it?")
        assert len(sents) == 2
        assert "1.5" in sents[0].text

    def test_initial_not_split(self):
        sents = segment_text("J. Smith has 3 pens. How many pens?")
        assert len(sents) == 2

    def test_blank_raises(self):
        with pytest.raises(EmptyInput):
            segment_text("   ")

    def test_composite_if_question_stays_whole(self):
        sents = segment_text(DENNIS["text"])
        assert len(sents) == 2
        assert sents[1].text == "If there are 3 boxes, how many pencils must go in each box?"


class TestIdentifyQuestion:
    def test_question_mark_wins(self):
        body, q = identify_question(segment_text(TIM_MIKE["text"]))
        assert q.text == "How many books do they have together?"
        assert [s.text for s in body] == ["Tim has 5 books.", "Mike has 7 books."]

    def test_find_cue_fallback(self):
        sents = [Sentence.from_text("Dennis has 12 pencils in boxes."),
                 Sentence.from_text("There are 3 boxes."),
                 Sentence.from_text("Find the number of pencils in each box.")]
        body, q = identify_question(sents)
        assert q.text.startswith("Find")
        assert len(body) == 2

    def test_no_question_raises(self):
        with pytest.raises(NoQuestionFound):
            identify_question([Sentence.from_text("A has 1 apple.")])

    def test_deterministic(self):
        for fix in FIXTURE_PROBLEMS:
            a = identify_question(segment_text(fix["text"]))
            b = identify_question(segment_text(fix["text"]))
            assert [s.text for s in a[0]] == [s.text for s in b[0]]
            assert a[1].text == b[1].text


class TestQuantities:
    def test_single_number(self):
        qs = extract_quantities("Gwen earned 20 points for each bag")
        assert [q.value for q in qs] == [Fraction(20)]

    def test_no_numbers(self):
        assert extract_quantities("A has no numbers here.") == []

    def test_two_numbers(self):
        qs = extract_quantities("cut 15 of an inch off a skirt and 5 of an inch")
        assert [q.value for q in qs] == [Fraction(15), Fraction(5)]

    def test_number_words(self):
        qs = extract_quantities("Seven red apples and twenty pears")
        assert [q.value for q in qs] == [Fraction(7), Fraction(20)]

    def test_hyphenated_compound(self):
        qs = extract_quantities("twenty-one pears")
        assert [q.value for q in qs] == [Fraction(21)]

    def test_decimal_value_exact(self):
        qs = extract_quantities("The rope is 1.5 meters")
        assert qs[0].value == Fraction(3, 2)
        assert qs[0].surface == "1.5"

    def test_span_roundtrip(self):
        sent = Sentence.from_text("Mike has 7 books.")
        for q in sent.quantities:
            assert " ".join(sent.tokens[q.span[0]:q.span[1]]) == q.surface


class TestReassemble:
    def test_roundtrip_modulo_ws(self):
        for fix in FIXTURE_PROBLEMS:
            sents = segment_text(fix["text"])
            body, q = identify_question(sents)
            assert normalize_ws(reassemble(body, q)) == normalize_ws(fix["text"])

    def test_question_only(self):
        assert reassemble([], Sentence.from_text("Q?")) == "Q?"


class TestInvariants:
    def test_partition(self, corpus20):
        texts = [fix["text"] for fix in FIXTURE_PROBLEMS] + [r["text"] for r in corpus20]
        for text in texts:
            joined = " ".join(s.text for s in segment_text(text))
            assert normalize_ws(joined) == normalize_ws(text)

    def test_quantity_conservation(self, corpus20):
        texts = [fix["text"] for fix in FIXTURE_PROBLEMS] + [r["text"] for r in corpus20]
        for text in texts:
            direct = sorted(q.value for q in extract_quantities(text))
            per_sentence = sorted(
                q.value for s in segment_text(text) for q in s.quantities)
            assert direct == per_sentence

    def test_problem_parse_token_count(self):
        p = MathWordProblem.parse(TIM_MIKE["text"])
        assert p.n_tokens == len(tokenize(TIM_MIKE["text"]))
        assert p.quantity_values() == [Fraction(5), Fraction(7)]
