"""Sentence paraphrasing attack.

Per sentence: fetch top-m paraphrase candidates, keep only candidates whose
numbers still carry the same head entity (value + entity noun + subject),
then walk the cross product of surviving candidates, fewest changed
sentences first, until the solver errs or the query budget runs out.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Iterator

from .equation import DEFAULT_TOL, judge
from .lexicon import looks_like_noun, looks_like_verb, singularize
from .problem import MathWordProblem, Sentence, normalize_ws
from .results import METHOD_SP, AttackResult, deceives


@dataclass(frozen=True)
class HeadEntity:
    """Binds a numeric value to the noun it counts and the actor holding it."""
    value: Fraction
    entity_lemma: str  # "" when no entity noun was found
    subject_lemma: str  # "" when no subject was found


@dataclass
class CandidateSet:
    """Surviving paraphrases for one sentence position.

    `candidates` keeps provider rank order with the original sentence
    appended last; the original is always present exactly once.
    """
    sentence_index: int
    originals_kept: bool
    candidates: list[str]

    @property
    def original(self) -> str:
        return self.candidates[-1]

    @property
    def alternatives(self) -> list[str]:
        return self.candidates[:-1]


def _possessive_base(token: str) -> str | None:
    for mark in ("'s", "’s"):
        if token.endswith(mark) and len(token) > 2:
            return token[: -len(mark)]
    return None


def _is_proper_like(token: str) -> bool:
    base = _possessive_base(token) or token
    return bool(base) and base[0].isupper() and base.isalpha() and looks_like_noun(base)


def _nearest_noun(tokens: tuple[str, ...], start: int, step: int) -> str:
    i = start
    while 0 <= i < len(tokens):
        tok = tokens[i]
        base = _possessive_base(tok) or tok
        if looks_like_noun(base):
            return singularize(base)
        i += step
    return ""


def _sentence_subject(tokens: tuple[str, ...]) -> str:
    verb_idx = len(tokens)
    for i, tok in enumerate(tokens):
        if looks_like_verb(tok):
            verb_idx = i
            break
    for tok in tokens[:verb_idx]:
        if _is_proper_like(tok):
            return singularize(_possessive_base(tok) or tok)
    for tok in tokens:
        base = _possessive_base(tok)
        if base and looks_like_noun(base):
            return singularize(base)
    for tok in tokens[:verb_idx]:
        if looks_like_noun(tok):
            return singularize(tok)
    return ""


def extract_head_entities(sentence: Sentence | str) -> list[HeadEntity]:
    """One head entity per numeric mention in the sentence.

    Entity: nearest noun after the number, else nearest noun before it.
    Subject: first proper noun (or noun-phrase head) before the main verb;
    a possessive form ("Mike's possession") supplies the possessor.
    """
    if isinstance(sentence, str):
        sentence = Sentence.from_text(sentence)
    subject = _sentence_subject(sentence.tokens)
    heads = []
    for q in sentence.quantities:
        entity = _nearest_noun(sentence.tokens, q.span[1], +1)
        if not entity:
            entity = _nearest_noun(sentence.tokens, q.span[0] - 1, -1)
        heads.append(HeadEntity(value=q.value, entity_lemma=entity, subject_lemma=subject))
    return heads


def _value_multiset(sentence: Sentence) -> Counter:
    return Counter(q.value for q in sentence.quantities)


def filter_candidates(
    original: Sentence | str,
    raw_candidates: Iterable[str],
    sentence_index: int = 0,
) -> CandidateSet:
    """Keep candidates that preserve numbers and their head entities.

    A candidate survives iff its quantity-value multiset equals the
    original's and every original head entity is matched by some candidate
    head entity (same value, entity lemma and subject lemma; empty lemmas
    match only empty).  Duplicates (and candidates equal to the original
    after whitespace normalization) are dropped, first occurrence wins; the
    original sentence is appended last.
    """
    if isinstance(original, str):
        original = Sentence.from_text(original)
    orig_values = _value_multiset(original)
    orig_heads = extract_head_entities(original)
    survivors: list[str] = []
    seen = {normalize_ws(original.text)}
    for cand_text in raw_candidates:
        if not cand_text or not cand_text.strip():
            continue
        norm = normalize_ws(cand_text)
        if norm in seen:
            continue
        cand = Sentence.from_text(cand_text)
        if _value_multiset(cand) != orig_values:
            continue
        cand_heads = extract_head_entities(cand)
        if all(h in cand_heads for h in orig_heads):
            survivors.append(cand_text)
            seen.add(norm)
    return CandidateSet(
        sentence_index=sentence_index,
        originals_kept=True,
        candidates=survivors + [original.text],
    )


def _rank_vectors(sizes: list[int]) -> Iterator[tuple[int, ...]]:
    """All non-zero choice vectors, fewest non-original picks first, then
    lexicographic.  Rank 0 is the original; ranks 1..size are alternatives.
    """
    k = len(sizes)
    positions_with_alts = [i for i in range(k) if sizes[i] > 0]
    for weight in range(1, len(positions_with_alts) + 1):
        batch = []
        for pos_subset in combinations(positions_with_alts, weight):
            for ranks in product(*(range(1, sizes[p] + 1) for p in pos_subset)):
                vec = [0] * k
                for p, r in zip(pos_subset, ranks):
                    vec[p] = r
                batch.append(tuple(vec))
        yield from sorted(batch)


def _text_for_vector(sets: list[CandidateSet], vec: tuple[int, ...]) -> str:
    parts = []
    for cset, rank in zip(sets, vec):
        parts.append(cset.original if rank == 0 else cset.alternatives[rank - 1])
    return " ".join(parts)


def combination_stream(
    sets: list[CandidateSet], budget: int
) -> Iterator[tuple[str, tuple[int, ...]]]:
    if budget < 1:
        raise ValueError("budget must be >= 1")
    sizes = [len(s.alternatives) for s in sets]
    emitted = 0
    for vec in _rank_vectors(sizes):
        if emitted >= budget:
            return
        yield _text_for_vector(sets, vec), vec
        emitted += 1


def enumerate_combinations(sets: list[CandidateSet], budget: int) -> Iterator[str]:
    """Perturbed problem texts, ordered by (changed-sentence count, rank),
    skipping the all-original combination, capped at `budget`."""
    for text, _vec in combination_stream(sets, budget):
        yield text


def product_size(sets: list[CandidateSet]) -> int:
    n = 1
    for s in sets:
        n *= len(s.candidates)
    return n


def build_candidate_sets(
    problem: MathWordProblem, provider, m: int
) -> list[CandidateSet]:
    sets = []
    for idx, sent in enumerate(problem.sentences):
        raw = provider.paraphrase(sent.text, m)
        sets.append(filter_candidates(sent, raw[:m], sentence_index=idx))
    return sets


def sp_attack(
    problem: MathWordProblem,
    solver,
    provider,
    m: int = 7,
    budget: int = 512,
    tol: float = DEFAULT_TOL,
    success_rule: str = "verdict",
) -> AttackResult:
    """Search the filtered paraphrase product for a deceiving problem text.

    Stops at the first combination the solver gets wrong; the final text
    stays the original when nothing within budget deceives.  Problems the
    solver already gets wrong are not searched (no success is possible and
    the final text must stay put).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    orig_text = problem.raw_text
    orig_pred = solver.solve(orig_text)
    orig_v = judge(orig_pred, problem.gold_equation, problem.gold_answer, tol)
    queries = 1

    def unchanged(originally_correct: bool, tried: int, note: str | None = None) -> AttackResult:
        notes = {"combinations_tried": tried}
        if note:
            notes["why"] = note
        return AttackResult(
            method=METHOD_SP, original_text=orig_text, adversarial_text=orig_text,
            original_prediction=orig_pred, adversarial_prediction=orig_pred,
            success=False, queries_used=queries, originally_correct=originally_correct,
            original_verdict=orig_v, adversarial_verdict=orig_v,
            problem_id=problem.id, notes=notes,
        )

    if not orig_v.correct:
        return unchanged(False, 0, "originally incorrect; not attacked")

    sets = build_candidate_sets(problem, provider, m)
    tried = 0
    for text, vec in combination_stream(sets, budget):
        pred = solver.solve(text)
        queries += 1
        tried += 1
        verdict = judge(pred, problem.gold_equation, problem.gold_answer, tol)
        if deceives(orig_pred, orig_v, pred, verdict, success_rule):
            return AttackResult(
                method=METHOD_SP, original_text=orig_text, adversarial_text=text,
                original_prediction=orig_pred, adversarial_prediction=pred,
                success=True, queries_used=queries, originally_correct=True,
                original_verdict=orig_v, adversarial_verdict=verdict,
                problem_id=problem.id,
                notes={"combinations_tried": tried, "choice_vector": list(vec)},
            )
    return unchanged(True, tried)
