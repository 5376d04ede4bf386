"""Dataset ingestion and the strict-accuracy / macro-F1 / micro-F1 metrics.

Gold and predicted type paths are both expanded to their ancestor
closures before set arithmetic, so a prediction at partial depth earns
partial credit while strict accuracy demands exact expanded-set
equality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from fgtyper.errors import DataError, UnknownPathError
from fgtyper.ontology import TypeOntology, TypePath


@dataclass(frozen=True)
class LabeledMention:
    sentence: str
    span: tuple[int, int]
    gold_paths: tuple[TypePath, ...]


@dataclass(frozen=True)
class PredictedMention:
    sentence: str | None
    span: tuple[int, int]
    mention: str
    path: TypePath


@dataclass(frozen=True)
class EvalReport:
    strict_accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    micro_precision: float
    micro_recall: float
    micro_f1: float
    mention_count: int

    def to_json_obj(self) -> dict:
        return {
            "strict_accuracy": self.strict_accuracy,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "micro_precision": self.micro_precision,
            "micro_recall": self.micro_recall,
            "micro_f1": self.micro_f1,
            "mention_count": self.mention_count,
        }

    def to_table(self) -> str:
        rows = [
            ("strict accuracy", self.strict_accuracy),
            ("macro precision", self.macro_precision),
            ("macro recall", self.macro_recall),
            ("macro F1", self.macro_f1),
            ("micro precision", self.micro_precision),
            ("micro recall", self.micro_recall),
            ("micro F1", self.micro_f1),
        ]
        width = max(len(name) for name, _ in rows)
        lines = [f"{name.ljust(width)}  {value:.4f}" for name, value in rows]
        lines.append(f"{'mentions'.ljust(width)}  {self.mention_count}")
        return "\n".join(lines)


def expand_to_path_set(
    path: TypePath, ontology: TypeOntology | None = None
) -> frozenset[str]:
    """Ancestor closure of a path as canonical strings; size equals depth."""
    if ontology is not None and path not in ontology:
        raise UnknownPathError(f"unknown type path {path}")
    return frozenset(str(p) for p in path.prefixes())


def expand_paths(
    paths: Iterable[TypePath], ontology: TypeOntology | None = None
) -> frozenset[str]:
    out: set[str] = set()
    for p in paths:
        out.update(expand_to_path_set(p, ontology))
    return frozenset(out)


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def evaluate_sets(
    pairs: list[tuple[frozenset[str], frozenset[str]]]
) -> EvalReport:
    """Metrics over (gold expanded set, predicted expanded set) pairs."""
    if not pairs:
        raise DataError("cannot evaluate zero mentions")
    m = len(pairs)
    exact = 0
    macro_p_sum = 0.0
    macro_r_sum = 0.0
    inter_sum = 0
    pred_sum = 0
    gold_sum = 0
    for gold, pred in pairs:
        inter = len(gold & pred)
        if gold == pred:
            exact += 1
        macro_p_sum += inter / len(pred) if pred else 0.0
        macro_r_sum += inter / len(gold) if gold else 0.0
        inter_sum += inter
        pred_sum += len(pred)
        gold_sum += len(gold)
    macro_p = macro_p_sum / m
    macro_r = macro_r_sum / m
    micro_p = inter_sum / pred_sum if pred_sum else 0.0
    micro_r = inter_sum / gold_sum if gold_sum else 0.0
    return EvalReport(
        strict_accuracy=exact / m,
        macro_precision=macro_p,
        macro_recall=macro_r,
        macro_f1=_f1(macro_p, macro_r),
        micro_precision=micro_p,
        micro_recall=micro_r,
        micro_f1=_f1(micro_p, micro_r),
        mention_count=m,
    )


def evaluate(
    gold: list[LabeledMention],
    predictions: list[PredictedMention],
    ontology: TypeOntology | None = None,
) -> EvalReport:
    """Pair gold and predicted mentions by (mention text, span) and score.

    The decision record format carries no sentence identity, so pairing
    uses the (mention, span) multiset; duplicate keys match in order of
    appearance.
    """
    pred_pool: dict[tuple[str, int, int], list[PredictedMention]] = {}
    for p in predictions:
        key = (p.mention, p.span[0], p.span[1])
        pred_pool.setdefault(key, []).append(p)

    pairs: list[tuple[frozenset[str], frozenset[str]]] = []
    for g in gold:
        mention_text = g.sentence[g.span[0] : g.span[1]]
        key = (mention_text, g.span[0], g.span[1])
        bucket = pred_pool.get(key)
        if not bucket:
            raise DataError(f"no prediction for mention {mention_text!r} at {g.span}")
        p = bucket.pop(0)
        pairs.append(
            (expand_paths(g.gold_paths, ontology), expand_to_path_set(p.path, ontology))
        )
    leftovers = [p for bucket in pred_pool.values() for p in bucket]
    if leftovers:
        extra = leftovers[0]
        raise DataError(f"prediction without gold mention: {extra.mention!r} at {extra.span}")
    return evaluate_sets(pairs)


# -- file formats ------------------------------------------------------------


def parse_dataset(text: str) -> list[LabeledMention]:
    """JSONL: {"sentence": str, "mentions": [{"start", "end", "gold_types"}]}.

    gold_types may be absent for inputs that only drive typing.
    """
    mentions: list[LabeledMention] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            sentence = obj["sentence"]
            for m in obj["mentions"]:
                start, end = int(m["start"]), int(m["end"])
                gold = tuple(TypePath.parse(t) for t in m.get("gold_types", []))
                if not (0 <= start < end <= len(sentence)):
                    raise DataError(f"span [{start}, {end}) out of bounds")
                mentions.append(LabeledMention(sentence, (start, end), gold))
        except (KeyError, TypeError, ValueError, DataError) as exc:
            raise DataError(f"dataset line {lineno}: {exc}") from None
    return mentions


def load_dataset(source: str | Path) -> list[LabeledMention]:
    return parse_dataset(Path(source).read_text(encoding="utf-8"))


def parse_decisions(text: str) -> list[PredictedMention]:
    """Decision JSONL as written by the typing command."""
    out: list[PredictedMention] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            span = (int(obj["span"]["start"]), int(obj["span"]["end"]))
            out.append(
                PredictedMention(
                    sentence=obj.get("sentence"),
                    span=span,
                    mention=obj["mention"],
                    path=TypePath.parse(obj["path"]),
                )
            )
        except (KeyError, TypeError, ValueError, DataError) as exc:
            raise DataError(f"decisions line {lineno}: {exc}") from None
    return out


def load_decisions(source: str | Path) -> list[PredictedMention]:
    return parse_decisions(Path(source).read_text(encoding="utf-8"))
