#!/usr/bin/env python3
"""Compare keyword, nek and nek+wh retrieval on the built-in testbed.

Prints MAP, P@10 and per-topic AP for each mode, grouped by the phenomenon
each topic was built to exercise.
"""
import argparse
import time

from ontovsm import testbed
from ontovsm.evaluation import evaluate, parse_qrels, run_batch

MODES = ("keyword", "nek", "nek+wh")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--log-base", type=float, default=None, help="idf log base (default: natural)")
    ap.add_argument("-k", type=int, default=1000)
    args = ap.parse_args()

    t0 = time.perf_counter()
    kb, annotator, wh, idx = testbed.load_testbed(args.log_base)
    qrels = parse_qrels(testbed.qrels_text())
    topics = [(q, t) for q, t, _ in testbed.TOPICS]
    reports = {m: evaluate(run_batch(topics, idx, annotator, wh, m, args.k).run, qrels) for m in MODES}

    print(f"N={idx.N} terms={len(idx.terms)} topics={len(topics)}")
    print(f"{'mode':<8} {'P@10':>7} {'MAP':>7}")
    for m, r in reports.items():
        print(f"{m:<8} {r.precision:>7.4f} {r.map:>7.4f}")
    print()
    print(f"{'qid':<4} {'kind':<8} " + " ".join(f"{m:>7}" for m in MODES))
    for q, _, kind in testbed.TOPICS:
        print(f"{q:<4} {kind:<8} " + " ".join(f"{reports[m].per_query[q][1]:>7.3f}" for m in MODES))
    print(f"\n{time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
