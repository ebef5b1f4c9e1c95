#!/usr/bin/env python3
# Copyright 2026 The eoscore Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes a synthetic caption set with a known artifact mix.

1000 captions: 500 clean, 500 artifacts of which 449 (89.8%) end in "a".
Captions are shuffled with a fixed seed and grouped five per record.
"""

import json
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "fixtures")

SUBJECTS = ["a man", "a woman", "a dog", "two cats", "a child", "a train",
            "a bus", "a bird", "a horse", "a group of people"]
CLEAN_TAILS = ["riding a bike", "sitting on a bench", "standing in a field",
               "walking down a street", "eating a sandwich"]
# Trailing fragments per class.
FRAGMENTS = {
    "a": ["sitting on a", "with a", "next to a", "and a", "in front of a"],
    "in": ["standing in"],
    "of": ["on top of", "in front of"],
    "the": ["walking on the", "in the"],
    "with": ["a table with"],
    "on": ["a street with a bus on"],
    "and": ["a plate of food and"],
    "*": ["on top", "in front", "next"],
}
COUNTS = {"a": 449, "in": 10, "of": 8, "the": 8, "with": 7, "on": 8,
          "and": 6, "*": 4}
CLEAN = 500


def main():
    rng = random.Random(898)
    captions = []
    for i in range(CLEAN):
        captions.append("%s %s" % (SUBJECTS[i % len(SUBJECTS)],
                                   CLEAN_TAILS[(i // len(SUBJECTS)) % len(CLEAN_TAILS)]))
    bigrams = {}
    for cls, count in COUNTS.items():
        frags = FRAGMENTS[cls]
        for i in range(count):
            frag = frags[i % len(frags)]
            subject = SUBJECTS[i % len(SUBJECTS)]
            caption = frag if cls == "on" else "%s %s" % (subject, frag)
            captions.append(caption)
            words = caption.split()
            key = " ".join(words[-2:])
            bigrams.setdefault(cls, {}).setdefault(key, 0)
            bigrams[cls][key] += 1
    rng.shuffle(captions)
    with open(os.path.join(FIXTURES, "artifact_mix.jsonl"), "w") as f:
        for r in range(0, len(captions), 5):
            f.write(json.dumps({"image_id": "mix_%03d" % (r // 5),
                                "samples": captions[r:r + 5]}) + "\n")
    artifacts = sum(COUNTS.values())
    with open(os.path.join(FIXTURES, "artifact_mix_expected.json"), "w") as f:
        json.dump({"total": len(captions), "clean": CLEAN,
                   "artifacts": artifacts, "counts": COUNTS,
                   "artifact_rate": artifacts / len(captions),
                   "class_a_share": COUNTS["a"] / artifacts,
                   "bigrams": bigrams}, f, indent=1, sort_keys=True)


if __name__ == "__main__":
    main()
