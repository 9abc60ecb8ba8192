#!/usr/bin/env python3
"""Write the synthetic testbed (KB, gazetteer, Wh map, corpus, topics, qrels) to a directory."""
import argparse

from ontovsm.testbed import write_testbed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", help="target directory")
    args = ap.parse_args()
    files = write_testbed(args.out)
    for name in ("kb", "gazetteer", "wh_map", "corpus", "topics", "qrels"):
        print(f"{name:10s} {getattr(files, name)}")


if __name__ == "__main__":
    main()
