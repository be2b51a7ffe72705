"""Regenerates the seeded demo corpus: demo_talks.csv, demo_speakers.csv, demo_pos.tsv."""

import csv
import random

rng = random.Random(20240601)

FUNCTION = ["the", "a", "and", "of", "to", "in", "that", "it", "is", "an"]
PRONOUN = ["i", "me", "my", "we", "us", "our", "you", "your", "they", "she", "he"]
CONTENT = ["people", "talk", "friends", "think", "know", "because", "maybe", "now", "today",
           "years", "work", "job", "good", "great", "love", "hope", "sad", "afraid", "idea",
           "world", "city", "water", "story", "music", "science", "design", "future", "data"]
MALE_LEAN = ["balloon", "engine", "rocket", "football", "machine", "bridge"]
FEMALE_LEAN = ["jealousy", "mother", "family", "children", "dance", "garden"]
TAGS = {w: "DET" for w in ["the", "a", "an"]}
TAGS.update({w: "PRON" for w in PRONOUN})
TAGS.update({"and": "CCONJ", "of": "ADP", "to": "PART", "in": "ADP", "that": "SCONJ", "it": "PRON",
             "is": "AUX", "because": "SCONJ", "maybe": "ADV", "now": "ADV", "today": "NOUN",
             "think": "VERB", "know": "VERB", "love": "VERB", "hope": "VERB", "talk": "VERB",
             "good": "ADJ", "great": "ADJ", "sad": "ADJ", "afraid": "ADJ"})


def speech(gender):
    words = []
    lean = MALE_LEAN if gender == "male" else FEMALE_LEAN
    for _ in range(rng.randint(320, 520)):
        r = rng.random()
        if r < 0.45:
            words.append(rng.choice(FUNCTION))
        elif r < 0.62:
            words.append(rng.choice(PRONOUN))
        elif r < 0.70:
            words.append(rng.choice(lean))
        else:
            words.append(rng.choice(CONTENT))
        if rng.random() < 0.01:
            words.append("(Laughter)")
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


speakers = [(f"Speaker M{i:02d}", "male") for i in range(40)] + [(f"Speaker F{i:02d}", "female") for i in range(30)]
speakers += [(f"Speaker U{i:02d}", "") for i in range(4)]
talks = []
for idx, (name, gender) in enumerate(speakers):
    talks.append((f"t{idx:03d}", name, gender))
for name, gender in speakers[:6]:
    talks.append((f"t{len(talks):03d}", name, gender))

with open("demo_talks.csv", "w", newline="", encoding="utf-8") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["talk_id", "speaker_name", "text", "published", "duration_seconds"])
    texts = {}
    for talk_id, name, gender in talks:
        texts[talk_id] = speech(gender or rng.choice(["male", "female"]))
        w.writerow([talk_id, name, texts[talk_id], f"20{10 + int(talk_id[1:]) % 10}-01-01", rng.randint(300, 1100)])

with open("demo_speakers.csv", "w", newline="", encoding="utf-8") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["speaker_name", "gender", "origin"])
    for name, gender in speakers:
        w.writerow([name, gender or "unknown", rng.choice(["US", "UK", "IN", "NG", "BR"])])

with open("demo_pos.tsv", "w", encoding="utf-8") as f:
    for talk_id, _, _ in talks:
        f.write(f"# doc {talk_id}\n")
        for word in texts[talk_id].rstrip(".").split():
            if word.startswith("("):
                continue
            f.write(f"{word.lower()}\t{TAGS.get(word.lower(), 'NOUN')}\n")
        f.write(".\tPUNCT\n\n")
