"""Wrappers around the masked-LM and NLI models.

Both load eagerly so a bad identifier fails at startup, and run in eval
mode under no_grad so identical requests give identical responses.
"""

from __future__ import annotations

import torch
from transformers import (
    AutoModelForMaskedLM,
    AutoModelForSequenceClassification,
    AutoTokenizer,
)

ENGINE_MASK = "[MASK]"


class MaskFiller:
    def __init__(self, model_id: str):
        self.tokenizer = AutoTokenizer.from_pretrained(model_id)
        self.model = AutoModelForMaskedLM.from_pretrained(model_id)
        self.model.eval()
        if self.tokenizer.mask_token is None:
            raise ValueError(f"{model_id} has no mask token")

    def predict(self, text: str, top_k: int) -> list[dict]:
        if text.count(ENGINE_MASK) != 1:
            raise ValueError("text must contain exactly one [MASK] slot")
        if top_k < 1:
            raise ValueError("top_k must be >= 1")
        native = text.replace(ENGINE_MASK, self.tokenizer.mask_token)
        encoding = self.tokenizer(native, return_tensors="pt", truncation=True)
        mask_positions = (
            encoding["input_ids"][0] == self.tokenizer.mask_token_id
        ).nonzero()
        if len(mask_positions) != 1:
            raise ValueError("mask slot lost in tokenization")
        with torch.no_grad():
            logits = self.model(**encoding).logits[0, mask_positions[0, 0]]
        probs = torch.softmax(logits, dim=-1)
        k = min(top_k, probs.shape[-1])
        top = torch.topk(probs, k)
        tokens = self.tokenizer.convert_ids_to_tokens(top.indices.tolist())
        return [
            {"token": token, "probability": float(p)}
            for token, p in zip(tokens, top.values)
        ]


class EntailmentScorer:
    def __init__(self, model_id: str):
        self.tokenizer = AutoTokenizer.from_pretrained(model_id)
        self.model = AutoModelForSequenceClassification.from_pretrained(model_id)
        self.model.eval()
        self._index = self._label_indices(self.model.config.id2label)

    @staticmethod
    def _label_indices(id2label: dict) -> dict[str, int]:
        index = {}
        for i, label in id2label.items():
            low = str(label).lower()
            for field in ("entail", "neutral", "contradict"):
                if low.startswith(field):
                    index[field] = int(i)
        missing = {"entail", "neutral", "contradict"} - set(index)
        if missing:
            raise ValueError(f"NLI model labels {id2label} missing {sorted(missing)}")
        return index

    def score(self, premise: str, hypothesis: str) -> dict[str, float]:
        if not premise or not hypothesis:
            raise ValueError("premise and hypothesis must be non-empty")
        encoding = self.tokenizer(premise, hypothesis, return_tensors="pt", truncation=True)
        with torch.no_grad():
            logits = self.model(**encoding).logits[0]
        probs = torch.softmax(logits, dim=-1)
        return {
            "entail": float(probs[self._index["entail"]]),
            "neutral": float(probs[self._index["neutral"]]),
            "contradict": float(probs[self._index["contradict"]]),
        }
