"""Generate the bundled 200-caption fixture corpus and companion files.

Output (deterministic):
  fixtures/corpus_200.csv      art_style,painting,emotion,utterance,genre,painter,annotator_id
  fixtures/generations.csv     painting,utterance   (one per artwork)
  fixtures/predictions.csv     painting + 9 probabilities in fixed emotion order
"""

import csv
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

EMOTIONS = ["anger", "disgust", "fear", "sadness", "amusement", "awe",
            "contentment", "excitement", "something else"]

STYLES = ["Impressionism", "Baroque", "Romanticism", "Expressionism",
          "Cubism", "Realism", "Symbolism", "Post_Impressionism"]
GENRES = ["landscape", "portrait", "still_life", "religious_painting",
          "genre_painting", "abstract"]
PAINTERS = ["claude-monet", "rembrandt", "caspar-david-friedrich",
            "edvard-munch", "pablo-picasso", "gustave-courbet",
            "odilon-redon", "vincent-van-gogh"]

SUBJECTS = {
    "landscape": ["the river", "the mountains", "the field", "the trees",
                  "the sky", "the clouds", "the sea", "the village"],
    "portrait": ["the woman", "the man", "the old man", "the girl",
                 "the child", "the lady", "the soldier", "the monk"],
    "still_life": ["the flowers", "the fruit", "the bowl", "the vase",
                   "the bread", "the apples", "the table", "the candle"],
    "religious_painting": ["the angels", "the saint", "the crowd",
                           "the figure", "the church", "the light"],
    "genre_painting": ["the dancers", "the workers", "the family",
                       "the people", "the musicians", "the market"],
    "abstract": ["the shapes", "the lines", "the colors", "the squares",
                 "the circles", "the brush strokes"],
}

TEMPLATES = {
    "anger": [
        "{s} looks angry and it makes me furious",
        "the harsh red tones and {s} make me feel irritated",
        "i hate how {s} is treated so cruelly here",
        "{s} seems violent and aggressive which annoys me",
    ],
    "disgust": [
        "{s} looks dirty and rotten and it is disgusting",
        "the colors are muddy and {s} looks gross",
        "{s} is ugly and the whole scene feels repulsive",
        "i dislike the sickly green of {s}",
    ],
    "fear": [
        "{s} is dark and ominous and it scares me",
        "the shadows around {s} feel creepy and threatening",
        "{s} looks like a ghost in the night",
        "i am afraid of what is hiding behind {s}",
    ],
    "sadness": [
        "{s} looks lonely and sad under the grey sky",
        "the muted colors make {s} seem depressed and tired",
        "{s} reminds me of a funeral and loss",
        "there is a quiet sorrow in {s} that makes me feel blue",
    ],
    "amusement": [
        "{s} looks so silly and funny",
        "the expression of {s} makes me laugh",
        "{s} looks like a cartoon and it is amusing",
        "i find the odd pose of {s} hilarious",
    ],
    "awe": [
        "{s} is majestic and the detail is stunning",
        "the light on {s} is breathtaking and beautiful",
        "i am amazed by how vast {s} appears",
        "{s} looks like a glimpse of heaven",
    ],
    "contentment": [
        "{s} looks calm and peaceful in the soft light",
        "the gentle colors of {s} make me feel relaxed",
        "{s} reminds me of a quiet summer afternoon",
        "i feel at ease looking at {s} and the warm tones",
    ],
    "excitement": [
        "{s} is full of energy and bright colors",
        "the bold movement of {s} makes me feel thrilled",
        "{s} looks like a party about to start",
        "the vivid colors and {s} make me excited to explore",
    ],
    "something else": [
        "i wonder why {s} was painted this way",
        "{s} makes me think of my grandmother",
        "i am not sure what {s} is supposed to mean",
        "the composition of {s} is unusual and puzzling",
    ],
}

GENERATION = [
    "{s} looks calm under the bright sky",
    "{s} is dark and lonely",
    "a painting of {s} with many colors",
    "{s} reminds me of home",
    "the light on {s} is beautiful",
]


def main():
    rng = random.Random(20240611)
    ROOT.mkdir(exist_ok=True)
    rows, gens, preds = [], [], []
    annotator = 0
    for k in range(40):
        painting = f"{PAINTERS[k % 8]}_painting-{k:02d}"
        style = STYLES[(k * 3) % len(STYLES)]
        genre = GENRES[k % len(GENRES)] if k % 10 != 9 else ""
        subjects = SUBJECTS[genre or "landscape"]
        dominant = EMOTIONS[rng.randrange(9)]
        pattern = k % 4
        labels = []
        for i in range(5):
            if pattern == 0:
                e = dominant
            elif pattern == 1:
                e = dominant if i < 3 else EMOTIONS[rng.randrange(9)]
            elif pattern == 2:
                e = dominant if i < 2 else EMOTIONS[rng.randrange(9)]
            else:
                e = EMOTIONS[rng.randrange(9)]
            labels.append(e)
        for e in labels:
            s = rng.choice(subjects)
            u = rng.choice(TEMPLATES[e]).format(s=s)
            if rng.random() < 0.25:
                u = u[0].upper() + u[1:] + rng.choice([".", "!", "...", ""])
            annotator += 1
            rows.append([style, painting, e, u, genre, PAINTERS[k % 8],
                         f"A{annotator % 37:03d}"])
        gens.append([painting, rng.choice(GENERATION).format(s=rng.choice(subjects))])
        counts = [labels.count(e) for e in EMOTIONS]
        p = [c / 5 for c in counts]
        if k % 5 == 4:
            p = [0.6 * x + 0.4 / 9 for x in p]
        preds.append([painting] + [f"{x:.6f}" for x in p])

    # rounding can leave the prediction sums a hair off 1; fix the last entry
    for row in preds:
        vals = [float(x) for x in row[1:]]
        vals[-1] = round(1.0 - sum(vals[:-1]), 6)
        row[1:] = [f"{x:.6f}" for x in vals]

    with open(ROOT / "corpus_200.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["art_style", "painting", "emotion", "utterance", "genre",
                    "painter", "annotator_id"])
        w.writerows(rows)
    with open(ROOT / "generations.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["painting", "utterance"])
        w.writerows(gens)
    with open(ROOT / "predictions.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["painting"] + [e.replace(" ", "-") for e in EMOTIONS])
        w.writerows(preds)


if __name__ == "__main__":
    main()
