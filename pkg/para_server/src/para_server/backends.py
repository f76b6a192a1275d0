"""Paraphrase generation backends.

A backend has `load()` (called once, off the request path) and
`generate(sentence, num_return)` returning candidates in score order.
Decoding is deterministic (beam search, no sampling) so identical requests
give identical candidate lists.
"""
from __future__ import annotations

import re
import threading


class StubBackend:
    """Deterministic template rewriter used for tests and offline runs.

    Selected with PARA_MODEL=stub.  Not a language model: it applies small
    surface rewrites that keep numbers intact, enough to drive the harness.
    """

    SWAPS = [
        (re.compile(r"\bhas\b"), "has got"),
        (re.compile(r"\bbought\b"), "purchased"),
        (re.compile(r"\bgave\b"), "handed"),
    ]

    def load(self) -> None:
        pass

    def generate(self, sentence: str, num_return: int) -> list[str]:
        text = sentence.strip()
        out = []
        for pattern, replacement in self.SWAPS:
            if pattern.search(text):
                out.append(pattern.sub(replacement, text, count=1))
        out.append(f"In other words, {text[0].lower() + text[1:]}" if text else text)
        if text.endswith("."):
            out.append(text[:-1] + ", as it happens.")
        return out[:num_return]


class TransformersBackend:
    """Seq2seq paraphraser via transformers; weights load lazily in load().

    Beam search with num_beams >= num_return and no sampling keeps the
    output deterministic across identical requests.
    """

    def __init__(self, model_id: str, device: str = "cpu", max_batch: int = 8):
        self.model_id = model_id
        self.device = device
        self.max_batch = max_batch
        self._tokenizer = None
        self._model = None
        self._infer_lock = threading.Lock()

    def load(self) -> None:
        from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

        self._tokenizer = AutoTokenizer.from_pretrained(self.model_id)
        self._model = AutoModelForSeq2SeqLM.from_pretrained(self.model_id)
        self._model.to(self.device)
        self._model.eval()

    def generate(self, sentence: str, num_return: int) -> list[str]:
        import torch

        with self._infer_lock:
            batch = self._tokenizer(
                [sentence], truncation=True, padding="longest",
                max_length=96, return_tensors="pt").to(self.device)
            with torch.no_grad():
                generated = self._model.generate(
                    **batch,
                    max_length=96,
                    num_beams=max(num_return, 4),
                    num_return_sequences=num_return,
                    do_sample=False,
                    temperature=1.0,
                )
            return self._tokenizer.batch_decode(generated, skip_special_tokens=True)


def make_backend(model: str, device: str = "cpu", max_batch: int = 8):
    if model == "stub":
        return StubBackend()
    return TransformersBackend(model, device=device, max_batch=max_batch)
