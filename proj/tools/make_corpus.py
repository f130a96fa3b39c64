#!/usr/bin/env python3
# Copyright 2026 The lstext Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the synthetic sentiment corpora under data/.

The corpora are template-built movie-review snippets: short, tweet-sized,
with sentiment carried by adjectives, verbs and negated phrases. Output is
fully determined by the fixed seeds below.
"""

import argparse
import csv
import json
import pathlib
import random

POS_ADJ = ["great", "wonderful", "brilliant", "moving", "charming", "delightful", "superb",
           "funny", "gripping", "beautiful", "fresh", "clever", "touching", "excellent",
           "heartfelt", "stunning", "enjoyable", "smart", "warm", "memorable"]
NEG_ADJ = ["dull", "boring", "awful", "tedious", "clumsy", "lifeless", "bland", "messy",
           "predictable", "shallow", "tiresome", "weak", "terrible", "forgettable",
           "pointless", "flat", "sloppy", "stale", "painful", "hollow"]
POS_VERB = ["loved", "enjoyed", "admired", "adored", "recommend", "savored"]
NEG_VERB = ["hated", "regretted", "disliked", "endured", "resented", "abandoned"]
NEUTRAL_ADJ = ["long", "quiet", "familiar", "ambitious", "talky", "colorful", "uneven",
               "european", "modest", "old-fashioned"]
SUBJECTS = ["the film", "this movie", "the story", "the script", "the cast", "the ending",
            "the director's latest", "the sequel", "the performances", "the soundtrack",
            "the dialogue", "the pacing", "the lead actor", "the whole thing", "the plot"]
FILLER = ["from start to finish", "in the end", "for the most part", "at its core",
          "on the big screen", "despite the hype", "as expected", "this summer", "overall",
          "by any measure", "if you ask me", "at two hours"]
INTENS = ["really", "truly", "quite", "so", "remarkably", "utterly", "thoroughly", ""]


def phrase(rng, polarity):
    """A clause whose sentiment is `polarity` (+1/-1)."""
    kind = rng.random()
    if kind < 0.18:
        # Negated opposite: "not boring" reads positive.
        adj = rng.choice(NEG_ADJ if polarity > 0 else POS_ADJ)
        return f"{rng.choice(SUBJECTS)} is not {adj}"
    if kind < 0.40:
        verb = rng.choice(POS_VERB if polarity > 0 else NEG_VERB)
        return f"i {verb} {rng.choice(SUBJECTS)}"
    adj = rng.choice(POS_ADJ if polarity > 0 else NEG_ADJ)
    inten = rng.choice(INTENS)
    return f"{rng.choice(SUBJECTS)} is {inten + ' ' if inten else ''}{adj}"


def review(rng, polarity):
    parts = [phrase(rng, polarity)]
    r = rng.random()
    if r < 0.35:
        parts.append(phrase(rng, polarity))
    elif r < 0.50:
        # Mixed signal: a weaker clause of the opposite sentiment first.
        parts.insert(0, phrase(rng, -polarity) + " but")
    if rng.random() < 0.5:
        parts.append(rng.choice(FILLER))
    if rng.random() < 0.3:
        parts.append(f"and {rng.choice(SUBJECTS)} feels {rng.choice(NEUTRAL_ADJ)}")
    text = " ".join(parts)
    text = text[0].upper() + text[1:]
    return text + rng.choice([".", "!", ".", "...", " !", "."])


def binary(rng, n, noise):
    rows = []
    for i in range(n):
        pol = 1 if i % 2 == 0 else -1
        label = "pos" if pol > 0 else "neg"
        if rng.random() < noise:
            label = "neg" if label == "pos" else "pos"
        rows.append((review(rng, pol), label))
    rng.shuffle(rows)
    return rows


def three_class(rng, n):
    rows = []
    for i in range(n):
        c = i % 3
        if c == 0:
            rows.append((review(rng, 1), "positive"))
        elif c == 1:
            rows.append((review(rng, -1), "negative"))
        else:
            subj = rng.choice(SUBJECTS)
            rows.append((f"{subj} is {rng.choice(NEUTRAL_ADJ)} {rng.choice(FILLER)}.", "neutral"))
    rng.shuffle(rows)
    return rows


def write_csv(path, rows):
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["text", "label"])
        w.writerows(rows)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    out = pathlib.Path(ap.parse_args().out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "rtr_style_2k.csv", binary(random.Random(20231), 2000, 0.03))
    write_csv(out / "toy_sentiment.csv", binary(random.Random(7), 160, 0.0))
    write_csv(out / "toy32.csv", binary(random.Random(32), 32, 0.0))
    with open(out / "toy_three_class.jsonl", "w", encoding="utf-8") as f:
        for text, label in three_class(random.Random(3), 90):
            f.write(json.dumps({"text": text, "label": label}) + "\n")


if __name__ == "__main__":
    main()
