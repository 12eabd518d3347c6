from __future__ import annotations

import json
import os
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any

from .certifier import (
    CLASSIFY_YES,
    PHENOMENON_NONE,
    PHENOMENON_PGST,
    certify_double_star,
    certify_path,
    classify_double_star,
    classify_path,
    negative_witness_path,
)
from .errors import InternalInconsistency, InvalidParameter
from .models import (
    ADMITTING_DECISIONS,
    DECISION_NONE,
    DECISION_PGST,
    PAIR_CENTERS,
    PAIR_EXTREMAL,
    PAIR_PENDANTS,
    SweepRecord,
)


FAMILY_PATH = 'path'
FAMILY_DOUBLE_STAR = 'double-star'
FAMILIES = (FAMILY_PATH, FAMILY_DOUBLE_STAR)
THREADS_ENV = 'PGFR_THREADS'


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            value = 0
        if value > 0:
            return value
    return os.cpu_count() or 1


def record_to_json(record: SweepRecord) -> str:
    payload = {
        'family': record.family,
        'parameters': record.parameters,
        'decision': record.decision,
        'gcd': record.gcd,
        'witness': list(record.witness) if record.witness is not None else None,
        'agrees_with_classifier': record.agrees_with_classifier,
    }
    if record.notes:
        payload['notes'] = list(record.notes)
    return json.dumps(payload, ensure_ascii=False)


def record_from_json(line: str) -> SweepRecord:
    payload = json.loads(line)
    witness = payload.get('witness')
    return SweepRecord(
        family=payload['family'],
        parameters=payload['parameters'],
        decision=payload['decision'],
        gcd=payload['gcd'],
        witness=tuple(witness) if witness is not None else None,
        agrees_with_classifier=payload['agrees_with_classifier'],
        notes=tuple(payload.get('notes', ())),
    )


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def path_record(n: int, a: int) -> SweepRecord:
    cert = certify_path(n, a)
    expected = classify_path(n, a) == CLASSIFY_YES
    admits = cert.decision in ADMITTING_DECISIONS
    notes: list[str] = []
    agrees = admits == expected
    if not agrees:
        notes.append(f'classifier says {classify_path(n, a)}, certifier says {cert.decision}')
    if (cert.decision == DECISION_PGST) != is_power_of_two(n):
        agrees = False
        notes.append('pgst decision does not match n being a power of two')
    if cert.decision == DECISION_NONE:
        try:
            negative_witness_path(n, a)
        except (InvalidParameter, InternalInconsistency) as exc:
            agrees = False
            notes.append(f'closed-form witness failed: {exc}')
    return SweepRecord(
        family=FAMILY_PATH,
        parameters={'n': n, 'a': a},
        decision=cert.decision,
        gcd=cert.gcd_value,
        witness=cert.witness,
        agrees_with_classifier=agrees,
        notes=tuple(notes),
    )


def double_star_pairs(m: int, n: int) -> list[str]:
    pairs = [PAIR_CENTERS]
    if max(m, n) >= 2:
        pairs.append(PAIR_PENDANTS)
    if (m, n) == (1, 1):
        pairs.append(PAIR_EXTREMAL)
    return pairs


def double_star_record(m: int, n: int, pair: str) -> SweepRecord:
    cert = certify_double_star(m, n, pair)
    reported = {item.pair: item.phenomenon for item in classify_double_star(m, n).pairs}
    phenomenon = reported.get(pair, PHENOMENON_NONE)
    admits = cert.decision in ADMITTING_DECISIONS
    agrees = admits == (phenomenon != PHENOMENON_NONE)
    if phenomenon == PHENOMENON_PGST and cert.decision != DECISION_PGST:
        agrees = False
    notes = () if agrees else (f'classifier says {phenomenon}, certifier says {cert.decision}',)
    return SweepRecord(
        family=FAMILY_DOUBLE_STAR,
        parameters={'m': m, 'n': n, 'pair': pair},
        decision=cert.decision,
        gcd=cert.gcd_value,
        witness=cert.witness,
        agrees_with_classifier=agrees,
        notes=notes,
    )


class FamilySweep:
    def __init__(self, family: str, limit: int, *, threads: int | None = None, stream=None) -> None:
        if family not in FAMILIES:
            raise InvalidParameter(f'unknown family {family!r}; expected one of {", ".join(FAMILIES)}')
        if limit < 1:
            raise InvalidParameter(f'sweep bound must be >= 1, got {limit}')
        self.family = family
        self.limit = limit
        self.threads = threads or worker_count()
        self.stream = stream or sys.stderr

    def instances(self) -> list[tuple[Any, ...]]:
        if self.family == FAMILY_PATH:
            return [(n, a) for n in range(2, self.limit + 1) for a in range(1, n // 2 + 1)]
        return [
            (m, n, pair)
            for m in range(1, self.limit + 1)
            for n in range(1, self.limit + 1)
            for pair in double_star_pairs(m, n)
        ]

    def _evaluate(self, instance: tuple[Any, ...]) -> SweepRecord:
        if self.family == FAMILY_PATH:
            return path_record(*instance)
        return double_star_record(*instance)

    def records(self) -> list[SweepRecord]:
        instances = self.instances()
        self._log(f'[sweep] family={self.family} bound={self.limit} instances={len(instances)} threads={self.threads}')
        # map() yields in submission order whatever the completion order.
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(self._evaluate, instances))

    def run(self, out_path: str | Path) -> int:
        """Write JSONL records; stops after the first disagreement and returns its count (0 or 1)."""
        out_path = Path(out_path)
        if out_path.parent and not out_path.parent.exists():
            out_path.parent.mkdir(parents=True, exist_ok=True)
        written: list[SweepRecord] = []
        disagreements = 0
        with out_path.open('w', encoding='utf-8') as handle:
            for record in self.records():
                handle.write(record_to_json(record) + '\n')
                written.append(record)
                if not record.agrees_with_classifier:
                    disagreements += 1
                    self._log(f'[disagree] {record.family} {record.parameters}: {"; ".join(record.notes)}')
                    break
        counts = Counter(record.decision for record in written)
        summary = ', '.join(f'{decision}={counts[decision]}' for decision in sorted(counts))
        self._log(f'done: records={len(written)}, disagreements={disagreements}' + (f', {summary}' if summary else ''))
        return disagreements

    def _log(self, message: str) -> None:
        self.stream.write(message + '\n')
        self.stream.flush()
