"""Deterministic generator for tiny_bundle.json.

Builds a small training corpus with planted signals, trains a deliberately
small model bundle (dim-16 fallback embeddings, one 8-tree combination),
and writes it next to this file. Rerunning reproduces the same bundle
version because every input is seeded.
"""

import random
from pathlib import Path

from contentlabels.boosting import GbtParams
from contentlabels.bundle import save_bundle
from contentlabels.embed import fallback_spec
from contentlabels.learn import RatingRecord, train_all

MARKER = "handson"
FILLER = ["soup", "recipe", "minutes", "broth", "garden", "story",
          "window", "planet", "kitchen", "reader"]


def build_corpus():
    rng = random.Random(99)
    pages = {}
    ratings = []
    for i in range(12):
        url = f"https://tiny.test/page{i}"
        k = i % 6  # planted actionability signal: marker count 0..5
        tokens = [MARKER] * (k * 3)
        tokens += [FILLER[rng.randrange(len(FILLER))] for _ in range(40)]
        rng.shuffle(tokens)
        pages[url] = tokens
        act = k + 1  # 1..6
        for p in range(4):
            pid = f"rater{(i * 4 + p) % 8}"
            ratings.append(RatingRecord(
                participant_id=pid,
                url=url,
                actionability=act,
                knowledge=rng.randint(1, 6),
                positive_emotion=rng.randint(1, 6),
                negative_emotion=rng.randint(1, 6),
            ))
    return pages, ratings


def make_tiny_bundle():
    pages, ratings = build_corpus()
    return train_all(
        ratings,
        fallback_spec(16),
        split_seed=5,
        resolve_tokens=pages.get,
        grid=[GbtParams(n_estimators=8, learning_rate=0.3, max_depth=2)],
        k_folds=2,
    )


if __name__ == "__main__":
    bundle = make_tiny_bundle()
    out = Path(__file__).parent / "tiny_bundle.json"
    save_bundle(bundle, out)
    print(f"{bundle.version} -> {out}")
