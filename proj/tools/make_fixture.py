#!/usr/bin/env python3
"""Regenerates data/fixture/: a 12-user, 50-message offline crawl source with
synthetic votes. Output is deterministic."""
import json
import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "fixture"
COLLECTED_AT = "2015-12-15T00:00:00Z"
SEEDS = [101, 102]

USERS = [
    # id, handle, created_at, verified, favorites, lists, tweets, followers, followees
    (101, "ada_writes", "2012-03-01T08:00:00Z", True, 5400, 120, 9, 4, 1),
    (102, "bo_reports", "2015-11-15T00:00:00Z", False, 40, 2, 6, 4, 1),
    (103, "cyd_c", "2015-11-14T00:00:00Z", False, 12, 0, 5, 3, 1),
    (104, "dee_d", "2015-11-14T00:00:01Z", False, 3, 1, 5, 2, 2),
    (105, "eli_e", "2014-06-30T12:00:00Z", False, 0, 0, 4, 2, 0),
    (106, "fox_f", "2013-01-20T00:00:00Z", False, 77, 4, 12, 0, 2),
    (107, "gus_g", "2011-09-09T09:09:09Z", True, 910, 33, 4, 2, 1),
    (108, "hal_h", "2015-12-05T00:00:00Z", False, 1, 0, 3, 0, 2),
    (109, "ivy_i", "2010-02-02T02:02:02Z", False, 250, 8, 2, 1, 2),
    (110, "jo_j", "2015-12-14T23:00:00Z", False, 0, 0, 40, 0, 2),
    (111, "kit_k", "2009-07-04T00:00:00Z", False, 60, 5, 2, 0, 1),
    (112, "lu_l", "2014-11-11T11:11:11Z", False, 15, 1, 1, 0, 1),
]

FOLLOWS = [
    (103, 101), (104, 101), (105, 101), (106, 101), (101, 103),
    (104, 102), (107, 102), (108, 102), (102, 104), (101, 102),
    (109, 103), (110, 103), (111, 104), (112, 107), (109, 105),
    (110, 109), (108, 107), (106, 105),
]

BADWORDS = ["damn", "idiot", "loser", "stupid", "trash"]
HASHTAGS = ["news", "politics", "socent", "music", "fail"]
SOURCES = ["web", "android", "iphone", "scheduler"]
PHRASES = [
    "you are a damn idiot", "great piece today", "what a loser move",
    "thanks for sharing", "this is stupid and trash", "see you at the meetup",
    "Damn, that damn thing", "interesting thread", "nobody asked you",
    "congrats on the launch",
]


def main():
    rng = random.Random(20151215)
    authors = [u[0] for u in USERS]
    tweets = []
    for i in range(50):
        mid = 5000001 + i
        author = authors[i % len(authors)]
        others = [u for u in authors if u != author] + [999]
        k = rng.choice([0, 1, 1, 1, 2, 2, 3])
        mentions = rng.sample(others, k)
        if i % 4 == 0 and author not in SEEDS:
            mentions.insert(0, rng.choice(SEEDS))
        if i == 7:
            mentions.append(author)  # self-mention, no edge
        if i == 19 and 999 not in mentions:
            mentions.append(999)  # mentioned user with no record
        if i == 11 and mentions:
            mentions.append(mentions[0])  # duplicate mention, one edge
        tags = rng.sample(HASHTAGS, rng.choice([0, 0, 1, 2]))
        urls = ["https://t.co/x%02d" % i] if rng.random() < 0.3 else []
        day = 1 + (i % 14)
        tweets.append({
            "id": mid, "author": author,
            "created_at": "2015-12-%02dT%02d:%02d:00Z" % (day, (i * 7) % 24, (i * 13) % 60),
            "text": " ".join(["@" + str(m) for m in mentions] + [rng.choice(PHRASES)]
                             + ["#" + t for t in tags] + urls),
            "mentions": mentions, "hashtags": tags, "urls": urls,
            "is_retweet": rng.random() < 0.15, "is_reply": rng.random() < 0.3,
            "retweet_count": rng.choice([0, 0, 1, 3, 12]),
            "source": rng.choice(SOURCES),
        })

    def edges():
        return sum(len({m for m in t["mentions"] if m != t["author"]}) for t in tweets)

    # Pin the edge count to 63 by topping up / trimming single-mention tweets.
    j = 0
    while edges() != 63:
        t = tweets[(13 + 3 * j) % 50]
        j += 1
        distinct = {m for m in t["mentions"] if m != t["author"]}
        if edges() < 63:
            cand = [u for u in authors if u != t["author"] and u not in distinct]
            t["mentions"].append(cand[0])
        elif distinct and t["id"] not in (5000008, 5000012, 5000020):
            t["mentions"].remove(sorted(distinct)[-1])
        t["text"] = " ".join(["@" + str(m) for m in t["mentions"]] + [t["text"].split("@")[-1].split(" ", 1)[-1]])

    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "users.jsonl", "w") as f:
        for (uid, handle, created, verified, fav, lists, tw, fol, fee) in USERS:
            f.write(json.dumps({
                "id": uid, "handle": handle, "created_at": created, "verified": verified,
                "favorites_count": fav, "lists_count": lists, "tweets_count": tw,
                "followers_count": fol, "followees_count": fee}) + "\n")
    with open(OUT / "tweets.jsonl", "w") as f:
        for t in tweets:
            f.write(json.dumps(t) + "\n")
    with open(OUT / "follows.csv", "w") as f:
        f.write("src,dst\n")
        for s, d in FOLLOWS:
            f.write("%d,%d\n" % (s, d))
    with open(OUT / "manifest.json", "w") as f:
        f.write(json.dumps({"collected_at": COLLECTED_AT}, indent=2) + "\n")
    with open(OUT / "seeds.txt", "w") as f:
        f.write("".join("%d\n" % s for s in SEEDS))
    with open(OUT / "badwords.txt", "w") as f:
        f.write("".join(w + "\n" for w in BADWORDS))

    # Synthetic votes on every seed-directed message, 3 to 5 per item.
    items = sorted(t["id"] for t in tweets
                   if {m for m in t["mentions"] if m != t["author"]} & set(SEEDS))
    workers = ["w%02d" % n for n in range(1, 10)]
    with open(OUT / "votes.jsonl", "w") as f:
        for n, item in enumerate(items):
            lean = rng.choice(["abusive", "acceptable", "acceptable", "mixed"])
            count = rng.choice([3, 3, 4, 5])
            for w in rng.sample(workers, count):
                if lean == "mixed":
                    vote = rng.choice(["abusive", "acceptable", "undecided"])
                else:
                    vote = lean if rng.random() < 0.8 else rng.choice(["undecided", "abusive", "acceptable"])
                platform = "trollslayer" if w in ("w01", "w02", "w03") else "crowdflower"
                f.write(json.dumps({"item_id": item, "worker_id": w, "platform": platform,
                                    "vote": vote, "ts": "2016-01-%02dT10:00:00Z" % (1 + n % 28)}) + "\n")
    print("tweets", len(tweets), "edges", edges(), "items", len(items))


if __name__ == "__main__":
    main()
