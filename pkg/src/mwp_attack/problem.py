"""Math word problem text model.

A problem is a list of body sentences followed by one question sentence.
Rules implemented here:

- Sentence boundaries are '.', '?' and '!'.  A '.' between two digits (a
  decimal number) or right after a single capital initial does not split.
- The question is the last sentence ending in '?'; failing that, the last
  sentence starting with one of the cue words ("how", "what", "find", "if").
  A sentence like "If she graded 3, but then 4 were turned in, how many ...?"
  stays in one piece and counts as the question.
- Tokens are maximal runs of letters (keeping "'s" / "n't" contractions
  attached), digit runs with optional decimal point, or single punctuation
  marks.
- Quantities are digit tokens plus a fixed lexicon of number words (0-20 and
  the tens); values are exact rationals.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EmptyInput, NoQuestionFound
from .lexicon import NUMBER_WORDS, TENS_WORDS

TOKEN_RE = re.compile(r"\d+\.\d+|\d+|[A-Za-z]+(?:['’][A-Za-z]+)?|[^\sA-Za-z0-9]")

DEFAULT_QUESTION_CUES = ("how", "what", "find", "if")


def tokenize(text: str) -> list[str]:
    return TOKEN_RE.findall(text)


def tokenize_spans(text: str) -> list[tuple[str, int, int]]:
    """Tokens together with their character spans in `text`."""
    return [(m.group(0), m.start(), m.end()) for m in TOKEN_RE.finditer(text)]


def normalize_ws(text: str) -> str:
    return " ".join(text.split())


@dataclass(frozen=True)
class QuantityMention:
    value: Fraction
    surface: str
    span: tuple[int, int]  # token index range, end exclusive


@dataclass(frozen=True)
class Sentence:
    text: str
    tokens: tuple[str, ...]
    quantities: tuple[QuantityMention, ...]

    @classmethod
    def from_text(cls, text: str) -> "Sentence":
        toks = tuple(tokenize(text))
        return cls(text=text, tokens=toks, quantities=tuple(_quantities_from_tokens(toks)))

    def ends_with(self, mark: str) -> bool:
        return self.text.rstrip().endswith(mark)


def _quantities_from_tokens(tokens: tuple[str, ...]) -> list[QuantityMention]:
    out: list[QuantityMention] = []
    i = 0
    n = len(tokens)
    while i < n:
        tok = tokens[i]
        low = tok.lower()
        if tok[0].isdigit():
            out.append(QuantityMention(Fraction(tok), tok, (i, i + 1)))
        elif low in NUMBER_WORDS:
            # hyphenated compounds like "twenty-one"
            if (low in TENS_WORDS and i + 2 < n and tokens[i + 1] == "-"
                    and tokens[i + 2].lower() in NUMBER_WORDS
                    and NUMBER_WORDS[tokens[i + 2].lower()] < 10):
                value = NUMBER_WORDS[low] + NUMBER_WORDS[tokens[i + 2].lower()]
                surface = f"{tok}-{tokens[i + 2]}"
                out.append(QuantityMention(value, surface, (i, i + 3)))
                i += 3
                continue
            out.append(QuantityMention(NUMBER_WORDS[low], tok, (i, i + 1)))
        i += 1
    return out


def extract_quantities(sentence_text: str) -> list[QuantityMention]:
    """All numeric mentions in left-to-right order, values as exact rationals."""
    return list(_quantities_from_tokens(tuple(tokenize(sentence_text))))


def _is_decimal_point(raw: str, i: int) -> bool:
    return (0 < i < len(raw) - 1 and raw[i - 1].isdigit() and raw[i + 1].isdigit())


def _is_initial_period(raw: str, i: int) -> bool:
    # single capital letter right before the '.', itself preceded by a non-word
    if i == 0 or not raw[i - 1].isupper():
        return False
    return i - 2 < 0 or not raw[i - 2].isalnum()


def segment_text(raw: str) -> list[Sentence]:
    """Split raw problem text into sentences.

    The output partitions the input: joining the sentence texts with single
    spaces reproduces the input up to whitespace normalization.
    """
    if raw is None or not raw.strip():
        raise EmptyInput("problem text is blank")
    sentences: list[Sentence] = []
    start = 0
    for i, ch in enumerate(raw):
        if ch not in ".?!":
            continue
        if ch == "." and (_is_decimal_point(raw, i) or _is_initial_period(raw, i)):
            continue
        seg = raw[start:i + 1].strip()
        if seg:
            sentences.append(Sentence.from_text(seg))
        start = i + 1
    tail = raw[start:].strip()
    if tail:
        sentences.append(Sentence.from_text(tail))
    return sentences


def identify_question(
    sentences: list[Sentence],
    cues: tuple[str, ...] = DEFAULT_QUESTION_CUES,
) -> tuple[list[Sentence], Sentence]:
    """Split sentences into (body, question).

    The question is the last sentence ending in '?'; otherwise the last
    sentence whose first word is a cue.  Body keeps its original order.
    """
    if not sentences:
        raise NoQuestionFound("no sentences")
    q_idx = None
    for i in range(len(sentences) - 1, -1, -1):
        if sentences[i].ends_with("?"):
            q_idx = i
            break
    if q_idx is None:
        for i in range(len(sentences) - 1, -1, -1):
            toks = sentences[i].tokens
            if toks and toks[0].lower() in cues:
                q_idx = i
                break
    if q_idx is None:
        raise NoQuestionFound("no sentence ends in '?' or starts with a question cue")
    body = [s for j, s in enumerate(sentences) if j != q_idx]
    return body, sentences[q_idx]


def reassemble(body: list[Sentence], question: Sentence) -> str:
    """Inverse of segment_text up to whitespace normalization."""
    return " ".join([s.text for s in body] + [question.text])


@dataclass(frozen=True)
class MathWordProblem:
    id: str
    raw_text: str
    body: tuple[Sentence, ...]
    question: Sentence
    gold_equation: str | None = None
    gold_answer: Fraction | None = None
    meta: dict = field(default_factory=dict, compare=False)

    @classmethod
    def parse(
        cls,
        raw: str,
        id: str = "",
        gold_equation: str | None = None,
        gold_answer: Fraction | None = None,
        cues: tuple[str, ...] = DEFAULT_QUESTION_CUES,
    ) -> "MathWordProblem":
        sentences = segment_text(raw)
        body, question = identify_question(sentences, cues)
        return cls(
            id=id,
            raw_text=raw,
            body=tuple(body),
            question=question,
            gold_equation=gold_equation,
            gold_answer=gold_answer,
        )

    @property
    def sentences(self) -> list[Sentence]:
        return list(self.body) + [self.question]

    @property
    def n_tokens(self) -> int:
        return sum(len(s.tokens) for s in self.sentences)

    def quantity_values(self) -> list[Fraction]:
        """Multiset (as sorted list) of every numeric value in the problem."""
        return sorted(q.value for s in self.sentences for q in s.quantities)

    def text(self) -> str:
        return reassemble(list(self.body), self.question)
