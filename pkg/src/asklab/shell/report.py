"""Verification records and their JSON / CSV / table serialisations."""

import csv
import io
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

from asklab.exactcore import PrimePower

SCHEMA_VERSION = 1
CSV_COLUMNS = (
    "check",
    "params",
    "lhs_num",
    "lhs_den_exp",
    "rhs_num",
    "rhs_den_exp",
    "congruence_exp",
    "pass",
)


def qpair(x, q):
    """Write a rational as (numerator, k) with x = numerator / q^k, k >= 0.

    Falls back to (\"a/b\", None) when the denominator is not a power of q.
    """
    x = Fraction(x)
    if q is None:
        return (str(x), None) if x.denominator != 1 else (x.numerator, 0)
    q = int(q)
    k = 0
    den = x.denominator
    while den % q == 0:
        den //= q
        k += 1
    if den != 1:
        return str(x), None
    return x.numerator * q**k // x.denominator, k


@dataclass
class CheckRecord:
    check: str
    params: dict
    lhs: object
    rhs: object
    status: str  # "pass", "fail" or "skip"
    congruence_exp: object = None
    runtime: float = 0.0
    note: str = ""
    repro: dict = None

    @property
    def passed(self):
        return self.status != "fail"

    def sort_key(self):
        return (self.check, json.dumps(self.params, sort_keys=True, default=str))

    def to_json(self):
        q = self.params.get("q")
        ln, le = qpair(self.lhs, q) if self.lhs is not None else (None, None)
        rn, re_ = qpair(self.rhs, q) if self.rhs is not None else (None, None)
        out = {
            "check": self.check,
            "params": self.params,
            "lhs": {"num": ln, "den_exp": le},
            "rhs": {"num": rn, "den_exp": re_},
            "congruence_exp": self.congruence_exp,
            "status": self.status,
            "pass": self.passed,
            "runtime": round(self.runtime, 4),
        }
        if self.note:
            out["note"] = self.note
        if self.repro is not None:
            out["repro"] = self.repro
        return out


@dataclass
class VerificationReport:
    records: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, record):
        self.records.append(record)
        return record

    def extend(self, other):
        self.records.extend(other.records)

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    @property
    def failures(self):
        return [r for r in self.records if r.status == "fail"]

    def sorted_records(self):
        return sorted(self.records, key=CheckRecord.sort_key)

    def counts(self):
        out = {"pass": 0, "fail": 0, "skip": 0}
        for r in self.records:
            out[r.status] += 1
        return out

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "meta": self.meta,
            "summary": self.counts(),
            "records": [r.to_json() for r in self.sorted_records()],
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.sorted_records():
            j = r.to_json()
            w.writerow(
                [
                    r.check,
                    json.dumps(r.params, sort_keys=True, default=str),
                    j["lhs"]["num"],
                    j["lhs"]["den_exp"],
                    j["rhs"]["num"],
                    j["rhs"]["den_exp"],
                    "" if r.congruence_exp is None else r.congruence_exp,
                    r.status,
                ]
            )
        return buf.getvalue()

    def to_table(self):
        rows = [("check", "params", "lhs", "rhs", "status")]
        for r in self.sorted_records():
            params = ", ".join(f"{k}={v}" for k, v in r.params.items() if k != "field")
            rows.append((r.check, params, _show(r.lhs), _show(r.rhs), r.status.upper()))
        widths = [max(len(str(row[i])) for row in rows) for i in range(5)]
        lines = ["  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
        c = self.counts()
        lines.append(f"{c['pass']} passed, {c['fail']} failed, {c['skip']} skipped")
        return "\n".join(lines)


def _show(x):
    return "-" if x is None else str(x)


def field_meta(q):
    from asklab.exactcore import field_for

    return field_for(PrimePower.from_q(q)).metadata()


@contextmanager
def timed():
    box = {"start": time.perf_counter()}
    yield box
    box["elapsed"] = time.perf_counter() - box["start"]


def equality_record(check, params, lhs, rhs, seconds=0.0, note="", repro=None):
    ok = Fraction(lhs) == Fraction(rhs)
    return CheckRecord(check, params, lhs, rhs, "pass" if ok else "fail", None, seconds, note,
                       None if ok else repro)
