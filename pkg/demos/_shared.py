"""Tiny synthetic corpus shared by the narrative demos.

Two topic families plus function words; sentences mix words from one
family only, so co-occurrence statistics cleanly separate the families.
"""

import numpy as np

COOKING = [
    "flour", "sugar", "butter", "oven", "dough",
    "yeast", "bread", "cake", "salt", "pan",
]
ASTRONOMY = [
    "star", "planet", "orbit", "galaxy", "comet",
    "telescope", "moon", "nebula", "cosmos", "gravity",
]
FUNCTION = ["the", "a", "and", "of", "with", "near", "very", "quite"]


def build_demo_corpus(n_per_topic: int = 200, seed: int = 0) -> list[list[str]]:
    rng = np.random.default_rng(seed)
    sentences = []
    for pool in (COOKING, ASTRONOMY):
        for _ in range(n_per_topic):
            topic = [pool[i] for i in rng.choice(len(pool), size=5, replace=False)]
            filler = [FUNCTION[i] for i in rng.choice(len(FUNCTION), size=3, replace=False)]
            sentence = topic + filler
            rng.shuffle(sentence)
            sentences.append(sentence)
    return sentences
