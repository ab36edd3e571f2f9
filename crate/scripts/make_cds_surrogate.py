#!/usr/bin/env python3
"""Generates a surrogate child-directed-speech transcript.

The Brent-Siskind transcripts are not redistributable, so the segmentation
experiment ships with a synthetic stand-in that mimics the properties that
matter for word recognition: short utterances, heavy repetition of a small
vocabulary, recurring frames ("look at the X", "where's the X") and a
Zipf-like word frequency profile. Output is deterministic for a given seed.

    python3 scripts/make_cds_surrogate.py --seed 7 --count 500 > data/corpora/cds_surrogate.txt
"""
import argparse
import random

NOUNS = ["ball", "doggy", "kitty", "book", "baby", "bottle", "duck", "cup",
         "shoe", "hat", "bear", "car", "juice", "bunny", "spoon", "truck",
         "blanket", "cookie", "apple", "mommy", "daddy", "bird", "fish", "boat"]
ADJS = ["big", "little", "nice", "pretty", "red", "soft", "funny", "yellow"]
VERBS = ["want", "see", "like", "have", "need", "hold"]
NAMES = ["mommy", "daddy", "baby"]
PRAISE = ["good girl", "good boy", "that's right", "very good", "yes", "okay",
          "oh", "hi", "bye bye", "uh oh", "all done", "no", "thank you"]

FRAMES = [
    (6, "look at the {n}"),
    (6, "where's the {n}"),
    (5, "do you {v} the {n}"),
    (5, "is that a {n}"),
    (4, "what a {a} {n}"),
    (4, "that's a {a} {n}"),
    (4, "can you say {n}"),
    (4, "{n}"),
    (3, "here's your {n}"),
    (3, "you {v} the {n} don't you"),
    (3, "where did the {n} go"),
    (3, "the {n} is {a}"),
    (2, "give {m} the {n}"),
    (2, "let's find the {n}"),
    (2, "there it is"),
    (2, "what's this"),
    (2, "what do you see"),
    (2, "come here"),
    (2, "{p}"),
    (2, "{p} {m}"),
    (1, "put it in the box"),
    (1, "do you {v} it"),
    (1, "it's a {n}"),
    (1, "see the {a} {n}"),
]


def zipf_choice(rng, items):
    weights = [1.0 / (rank + 1) for rank in range(len(items))]
    return rng.choices(items, weights=weights)[0]


def utterance(rng):
    frame = rng.choices([f for _, f in FRAMES], weights=[w for w, _ in FRAMES])[0]
    return frame.format(
        n=zipf_choice(rng, NOUNS),
        a=zipf_choice(rng, ADJS),
        v=zipf_choice(rng, VERBS),
        m=rng.choice(NAMES),
        p=rng.choice(PRAISE),
    )


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--count", type=int, default=500)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    for _ in range(args.count):
        print(utterance(rng))


if __name__ == "__main__":
    main()
