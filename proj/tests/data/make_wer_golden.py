#!/usr/bin/env python3
"""Regenerates wer_golden.tsv.

Each row: reference, hypothesis (space-joined, possibly empty), then S, D, I
and N for the minimum-edit alignment.  Among alignments with the fewest
errors, the one with the most substitutions is reported.
"""
import random
import sys


def align(ref, hyp):
    # best[i][j] = (errors, -subs, subs, dels, ins) over ref[:i], hyp[:j]
    n, m = len(ref), len(hyp)
    best = [[None] * (m + 1) for _ in range(n + 1)]
    best[0][0] = (0, 0, 0, 0, 0)
    for i in range(n + 1):
        for j in range(m + 1):
            if i == 0 and j == 0:
                continue
            cands = []
            if i > 0 and j > 0:
                e, _, s, d, k = best[i - 1][j - 1]
                if ref[i - 1] == hyp[j - 1]:
                    cands.append((e, -s, s, d, k))
                else:
                    cands.append((e + 1, -(s + 1), s + 1, d, k))
            if i > 0:
                e, _, s, d, k = best[i - 1][j]
                cands.append((e + 1, -s, s, d + 1, k))
            if j > 0:
                e, _, s, d, k = best[i][j - 1]
                cands.append((e + 1, -s, s, d, k + 1))
            best[i][j] = min(cands)
    _, _, s, d, k = best[n][m]
    return s, d, k


def main():
    rng = random.Random(20261014)
    vocab = ["bin", "lay", "place", "set", "blue", "green", "red", "white",
             "at", "by", "in", "with", "a", "b", "c", "zero", "one", "two",
             "again", "now", "please", "soon"]
    pairs = [
        ("bin blue at f two now", "bin blue at f two now"),
        ("bin blue at f two now", ""),
        ("bin blue at f two now", "bin blue at f three now"),
        ("set red by a one soon", "set red a one soon"),
        ("set red by a one soon", "set set red by a one soon"),
        ("a b", "b a"),
        ("a", "b c d"),
        ("a b c", "c"),
    ]
    while len(pairs) < 50:
        n = rng.randint(1, 8)
        ref = [rng.choice(vocab) for _ in range(n)]
        hyp = list(ref)
        for _ in range(rng.randint(0, 4)):
            op = rng.choice("sdi")
            if op == "s" and hyp:
                hyp[rng.randrange(len(hyp))] = rng.choice(vocab)
            elif op == "d" and hyp:
                del hyp[rng.randrange(len(hyp))]
            else:
                hyp.insert(rng.randint(0, len(hyp)), rng.choice(vocab))
        pairs.append((" ".join(ref), " ".join(hyp)))
    out = sys.stdout
    for ref, hyp in pairs:
        s, d, k = align(ref.split(), hyp.split())
        out.write(f"{ref}\t{hyp}\t{s}\t{d}\t{k}\t{len(ref.split())}\n")


if __name__ == "__main__":
    main()
