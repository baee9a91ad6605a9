#!/usr/bin/env python3
"""Write reference compound scores for the sentiment parity fixture.

Requires vaderSentiment 3.3.2 (pip install --no-deps vaderSentiment==3.3.2).

    python3 scripts/sentiment_golden.py
"""
import os

from vaderSentiment.vaderSentiment import SentimentIntensityAnalyzer

FIX = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "crates", "core", "tests", "fixtures")

analyzer = SentimentIntensityAnalyzer()
with open(os.path.join(FIX, "sentiment_sentences.txt"), encoding="utf-8") as f:
    sentences = [line.rstrip("\n") for line in f if line.strip()]
with open(os.path.join(FIX, "sentiment_golden.tsv"), "w", encoding="utf-8", newline="\n") as out:
    out.write("compound\tsentence\n")
    for s in sentences:
        out.write(f"{analyzer.polarity_scores(s)['compound']}\t{s}\n")
print(len(sentences), "sentences")
