#!/usr/bin/env python3
"""Write the WordNet noun hypernym graph as `child\tIsA\tparent` triplets.

Reads a WordNet database `data.noun` file directly. Each synset becomes one
term named `<first lemma>.n.<offset>` so names stay unique single tokens.
"""

import argparse
import sys


def parse_data_noun(path, instances):
    names = {}
    edges = []
    wanted = {"@", "@i"} if instances else {"@"}
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.startswith("  "):
                continue  # license header
            fields = line.split(" | ", 1)[0].split()
            offset = fields[0]
            w_cnt = int(fields[3], 16)
            lemma = fields[4].lower()
            names[offset] = f"{lemma}.n.{offset}"
            i = 4 + 2 * w_cnt
            p_cnt = int(fields[i])
            i += 1
            for _ in range(p_cnt):
                symbol, target, pos = fields[i], fields[i + 1], fields[i + 2]
                i += 4
                if symbol in wanted and pos == "n":
                    edges.append((offset, target))
    return names, edges


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("data_noun", help="path to WordNet data.noun")
    ap.add_argument("-o", "--output", help="output TSV (default: stdout)")
    ap.add_argument("--no-instances", action="store_true", help="skip instance hypernym pointers")
    args = ap.parse_args()

    names, edges = parse_data_noun(args.data_noun, not args.no_instances)
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    for child, parent in edges:
        out.write(f"{names[child]}\tIsA\t{names[parent]}\n")
    if args.output:
        out.close()
    print(f"synsets={len(names)} edges={len(edges)}", file=sys.stderr)


if __name__ == "__main__":
    main()
