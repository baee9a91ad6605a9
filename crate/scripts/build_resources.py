#!/usr/bin/env python3
"""Regenerate the bundled resource files under crates/core/data/.

Inputs are the upstream packages fetched with pip (no install needed):

    pip download --no-deps -d /tmp/pk vaderSentiment==3.3.2 textblob==0.20.1 \
        spacy-lookups-data==1.0.5 pattern3==3.0.0

then run:

    python3 scripts/build_resources.py /tmp/pk

Outputs are deterministic for fixed inputs.
"""
import collections
import gzip
import json
import os
import sys
import tarfile
import unicodedata
import xml.etree.ElementTree as ET
import zipfile

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "crates", "core", "data")

PENN_TO_UNIVERSAL = {
    "NN": "NOUN", "NNS": "NOUN", "NNP": "NOUN", "NNPS": "NOUN",
    "PRP": "PRON", "PRP$": "PRON", "WP": "PRON", "WP$": "PRON",
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ",
    "IN": "ADP",
    "VB": "VERB", "VBD": "VERB", "VBG": "VERB", "VBN": "VERB", "VBP": "VERB", "VBZ": "VERB", "MD": "VERB",
}


CLITICS = {"'s", "n't", "'re", "'ve", "'ll", "'d", "'m"}


def is_punct(ch):
    return unicodedata.category(ch).startswith("P") or unicodedata.category(ch).startswith("S")


def strip_punct(tok):
    start, end = 0, len(tok)
    while start < end and is_punct(tok[start]):
        start += 1
    while end > start and is_punct(tok[end - 1]):
        end -= 1
    return tok[start:end]


def member(archive, name):
    if archive.endswith(".whl"):
        return zipfile.ZipFile(archive).read(name)
    with tarfile.open(archive) as tf:
        return tf.extractfile(name).read()


def find(pkdir, prefix):
    for f in sorted(os.listdir(pkdir)):
        if f.lower().startswith(prefix):
            return os.path.join(pkdir, f)
    raise SystemExit("missing package " + prefix)


def write(rel, text):
    path = os.path.join(ROOT, rel)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    print("wrote", rel, len(text))


def vader(pkdir):
    whl = find(pkdir, "vadersentiment")
    lex = member(whl, "vaderSentiment/vader_lexicon.txt").decode("utf-8")
    rows = ["token\tvalence"]
    for line in lex.rstrip("\n").split("\n"):
        if not line:
            continue
        word, measure = line.strip().split("\t")[0:2]
        rows.append(f"{word}\t{measure}")
    write("sentiment/vader_lexicon.tsv", "\n".join(rows) + "\n")
    emo = member(whl, "vaderSentiment/emoji_utf8_lexicon.txt").decode("utf-8")
    rows = []
    for line in emo.rstrip("\n").split("\n"):
        e, desc = line.strip().split("\t")[0:2]
        if len(e) == 1:
            rows.append(f"{e}\t{desc}")
    write("sentiment/emoji_descriptions.tsv", "\n".join(rows) + "\n")
    ns = {"__name__": "vader_source"}
    exec(member(whl, "vaderSentiment/vaderSentiment.py").decode("utf-8"), ns)
    rules = {
        "version": 1,
        "booster_increment": ns["B_INCR"],
        "booster_decrement": ns["B_DECR"],
        "caps_increment": ns["C_INCR"],
        "negation_scalar": ns["N_SCALAR"],
        "alpha": 15.0,
        "neutral_threshold": 0.05,
        "scope_dampening": [1.0, 0.95, 0.9],
        "never_so_multiplier": 1.25,
        "but_before": 0.5,
        "but_after": 1.5,
        "exclamation_increment": 0.292,
        "exclamation_max": 4,
        "question_increment": 0.18,
        "question_max_count": 3,
        "question_cap": 0.96,
        "negations": sorted(ns["NEGATE"]),
        "boosters": {k: ("incr" if v > 0 else "decr") for k, v in sorted(ns["BOOSTER_DICT"].items())},
        "special_cases": dict(sorted(ns["SPECIAL_CASES"].items())),
    }
    write("sentiment/rules.json", json.dumps(rules, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


def subjectivity(pkdir):
    whl = find(pkdir, "textblob")
    root = ET.fromstring(member(whl, "textblob/en/en-sentiment.xml"))
    senses = collections.defaultdict(list)
    order = []
    pos_map = {"JJ": "ADJ", "NN": "NOUN", "VB": "VERB", "RB": "ADV"}
    for w in root.findall("word"):
        form = w.attrib.get("form", "").lower()
        pos = pos_map.get(w.attrib.get("pos", ""), "ANY")
        key = (form, pos)
        if key not in senses:
            order.append(key)
        senses[key].append((
            float(w.attrib.get("polarity", 0.0)),
            float(w.attrib.get("subjectivity", 0.0)),
            float(w.attrib.get("intensity", 1.0)),
        ))
    rows = ["lemma,tag,polarity,subjectivity,intensity"]
    for key in sorted(order):
        vals = senses[key]
        p = sum(v[0] for v in vals) / len(vals)
        s = sum(v[1] for v in vals) / len(vals)
        i = sum(v[2] for v in vals) / len(vals)
        form = key[0]
        if "," in form or '"' in form:
            form = '"' + form.replace('"', '""') + '"'
        rows.append(f"{form},{key[1]},{p:.6g},{s:.6g},{i:.6g}")
    write("subjectivity.csv", "\n".join(rows) + "\n")


def lemmas(pkdir):
    whl = find(pkdir, "spacy_lookups_data")
    base = "spacy_lookups_data/data/"
    exc = json.loads(gzip.decompress(member(whl, base + "en_lemma_exc.json.gz")))
    index = json.loads(gzip.decompress(member(whl, base + "en_lemma_index.json.gz")))
    tag = {"noun": "NOUN", "verb": "VERB", "adj": "ADJ"}
    rows = []
    for pos in ("adj", "noun", "verb"):
        for form in sorted(exc[pos]):
            lemma = exc[pos][form][0]
            if not lemma or len(lemma) > len(form) + 2:
                continue
            rows.append(f"{tag[pos]}\t{form}\t{lemma}")
    write("lemma/exceptions.tsv", "\n".join(rows) + "\n")
    rows = []
    for pos in ("adj", "noun", "verb"):
        for word in sorted(set(index[pos])):
            if " " in word or "_" in word:
                continue
            rows.append(f"{tag[pos]}\t{word}")
    write("lemma/index.tsv", "\n".join(rows) + "\n")


def tagged(pkdir):
    tgz = find(pkdir, "pattern3")
    raw = member(tgz, "pattern3-3.0.0/test/corpora/tagged-en-oanc.txt").decode("utf-8")
    out = []
    for line in raw.split("\n"):
        toks = []
        for item in line.split():
            word, _, penn = item.rpartition("/")
            penn = penn.split("|")[0]
            word = word.lower().replace("\u2019", "'")
            if word not in CLITICS:
                word = strip_punct(word)
            if not word or any(ch.isspace() for ch in word):
                continue
            toks.append(f"{word}_{PENN_TO_UNIVERSAL.get(penn, 'OTHER')}")
        if toks:
            out.append(" ".join(toks))
    write("tagger/oanc_universal.txt", "\n".join(out) + "\n")


if __name__ == "__main__":
    pk = sys.argv[1] if len(sys.argv) > 1 else "/tmp/pk"
    vader(pk)
    subjectivity(pk)
    lemmas(pk)
    tagged(pk)
