#!/usr/bin/env python3
"""Regenerate data/english_words.txt.

Inputs are two MIT-licensed PyPI wheels (fetch with
`pip download pyspellchecker==0.9.1 english-words==2.0.2 --no-deps -d DIR`):
  * pyspellchecker: English frequency table (surface forms, incl. inflections)
  * english-words:  GCIDE + Webster's 2nd headword sets (lemmas)

A surface form is kept when it, or its regular-inflection stem, is a
dictionary headword. The most frequent N survivors are written, one per line.
"""
import argparse
import gzip
import json
import pickle
import zipfile


def load_pickle(wheel, name):
    with zipfile.ZipFile(wheel) as z:
        return pickle.loads(z.read(f"english_words/data/{name}.pickle"))


def stems(word):
    yield word
    if word.endswith("ies") and len(word) > 4:
        yield word[:-3] + "y"
    if word.endswith("es") and len(word) > 3:
        yield word[:-2]
    if word.endswith("s") and len(word) > 2:
        yield word[:-1]
    if word.endswith("ied") and len(word) > 4:
        yield word[:-3] + "y"
    if word.endswith("ed") and len(word) > 3:
        yield word[:-2]
        yield word[:-1]
        if len(word) > 4 and word[-3] == word[-4]:
            yield word[:-3]
    if word.endswith("ing") and len(word) > 4:
        yield word[:-3]
        yield word[:-3] + "e"
        if len(word) > 5 and word[-4] == word[-5]:
            yield word[:-4]
    for suffix in ("er", "est"):
        if word.endswith(suffix) and len(word) > len(suffix) + 2:
            yield word[: -len(suffix)]
            yield word[: -len(suffix)] + "e"
    if word.endswith("ly") and len(word) > 4:
        yield word[:-2]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--spellchecker-wheel", required=True)
    ap.add_argument("--english-words-wheel", required=True)
    ap.add_argument("--size", type=int, default=50000)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    lemmas = load_pickle(args.english_words_wheel, "gcide_alpha_lower") | load_pickle(
        args.english_words_wheel, "web2_alpha_lower"
    )
    with zipfile.ZipFile(args.spellchecker_wheel) as z:
        freq = json.loads(gzip.decompress(z.read("spellchecker/resources/en.json.gz")))

    kept = []
    for word, count in freq.items():
        if not word.isascii() or not word.isalpha():
            continue
        if len(word) == 1 and word not in ("a", "i"):
            continue
        if any(s in lemmas for s in stems(word)):
            kept.append((-count, word))
    kept.sort()
    words = sorted(w for _, w in kept[: args.size])
    with open(args.out, "w", encoding="utf-8") as f:
        f.write("# English word list: most frequent dictionary-backed surface forms.\n")
        f.write("# Generated by tools/make_wordlist.py; one lowercase word per line.\n")
        for w in words:
            f.write(w + "\n")


if __name__ == "__main__":
    main()
