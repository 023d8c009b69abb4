#!/usr/bin/env python3
"""Generate the bundled dump-format fixture: fixtures/Posts.xml, Users.xml and run.json.

Accepted answers are drawn from shifted distributions (owner reputation,
score, response time, code volume, overlap with the question) so the
classifiers have something to find. A handful of rows exercise each
ingest discard rule.
"""

import argparse
import datetime as dt
import json
import random
from pathlib import Path
from xml.sax.saxutils import escape

ATTR_ESCAPES = {'"': "&quot;", "\n": "&#xA;", "\r": "&#xD;", "\t": "&#x9;"}

TOPIC_WORDS = {
    "java": [
        "arraylist", "hashmap", "stream", "lambda", "interface", "generics", "exception", "thread",
        "synchronized", "spring", "hibernate", "maven", "gradle", "servlet", "jvm", "garbage",
        "collector", "iterator", "comparator", "annotation", "reflection", "serializable", "inheritance",
        "constructor", "jdbc", "socket", "string", "buffer", "executor", "optional",
    ],
    "javascript": [
        "promise", "callback", "closure", "prototype", "async", "await", "event", "listener", "dom",
        "jquery", "react", "angular", "node", "npm", "webpack", "json", "array", "object", "scope",
        "hoisting", "fetch", "request", "element", "selector", "module", "import", "export", "regex",
        "timeout", "render",
    ],
    "python": [
        "list", "dict", "comprehension", "decorator", "generator", "pandas", "numpy", "django",
        "flask", "virtualenv", "pip", "tuple", "lambda", "import", "module", "class",
    ],
}
FILLER = [
    "problem", "working", "example", "trying", "value", "function", "method", "class", "error",
    "result", "code", "question", "simple", "return", "variable", "change", "data", "list", "file",
    "output", "input", "case", "issue", "approach", "solution", "version", "library", "test",
]
POSITIVE = ["great", "good", "works", "correct", "clean", "simple", "helpful", "easy", "perfect"]
NEGATIVE = ["bad", "wrong", "broken", "ugly", "slow", "fails", "confusing", "hard", "terrible"]
NON_ASCII = ["café", "naïve", "résumé", "日本語", "emoji 🙂"]

JAVA_CODE = [
    "List<String> items = new ArrayList<>();",
    "for (int i = 0; i < items.size(); i++) {",
    "    System.out.println(items.get(i));",
    "}",
    "Map<String, Integer> counts = new HashMap<>();",
    "counts.merge(word, 1, Integer::sum);",
    "return items.stream().filter(s -> !s.isEmpty()).collect(Collectors.toList());",
    "public static void main(String[] args) throws Exception {",
    "synchronized (lock) { queue.add(task); }",
]
JS_CODE = [
    "const items = data.filter(x => x.active);",
    "fetch(url).then(res => res.json()).then(render);",
    "async function load() { const r = await fetch(url); return r.json(); }",
    "document.querySelector('#app').addEventListener('click', onClick);",
    "let total = values.reduce((a, b) => a + b, 0);",
    "module.exports = { parse, render };",
    "if (typeof callback === 'function') { callback(null, result); }",
    "setTimeout(() => console.log(value), 100);",
]


def ts(t: dt.datetime) -> str:
    return t.strftime("%Y-%m-%dT%H:%M:%S.") + f"{t.microsecond // 1000:03d}"


def attr(value) -> str:
    return escape(str(value), ATTR_ESCAPES)


def row(**fields) -> str:
    return "  <row " + " ".join(f'{k}="{attr(v)}"' for k, v in fields.items() if v is not None) + " />"


def sentence(rng, words, n):
    return " ".join(rng.choice(words) for _ in range(n))


def prose(rng, topic_words, n_sent, sentiment=None):
    parts = []
    for _ in range(n_sent):
        s = sentence(rng, topic_words + FILLER, rng.randint(5, 12))
        if sentiment is not None and rng.random() < 0.6:
            s += " " + rng.choice(sentiment)
        parts.append(s.capitalize() + ".")
    return " ".join(parts)


def code_block(rng, tag, lines):
    pool = JAVA_CODE if tag == "java" else JS_CODE
    return "<pre><code>" + escape("\n".join(rng.choice(pool) for _ in range(lines))) + "\n</code></pre>"


def question_body(rng, tag, keywords):
    text = prose(rng, keywords, rng.randint(2, 4))
    body = f"<p>{escape(text)}</p>\n"
    if rng.random() < 0.5:
        body += code_block(rng, tag, rng.randint(1, 4)) + "\n"
    if rng.random() < 0.1:
        body += f"<p>{escape(rng.choice(NON_ASCII))} &amp; more</p>\n"
    return body


def answer_body(rng, tag, q_keywords, good):
    # Good answers reuse the question's topic words, carry more code and links.
    words = q_keywords if good or rng.random() < 0.3 else rng.sample(TOPIC_WORDS[tag], 6)
    sentiment = POSITIVE if (good and rng.random() < 0.7) or rng.random() < 0.2 else NEGATIVE
    body = f"<p>{escape(prose(rng, words, rng.randint(2, 5) if good else rng.randint(1, 3), sentiment))}</p>\n"
    code_lines = rng.randint(2, 8) if good else rng.choice([0, 0, 1, 2])
    if code_lines:
        body += code_block(rng, tag, code_lines) + "\n"
    if rng.random() < (0.6 if good else 0.15):
        body += f'<p>See <a href="https://docs.example.org/{tag}/{rng.randint(1, 999)}">the docs</a>.</p>\n'
    if rng.random() < 0.15:
        body += f"<p>Don't use <code>{escape(rng.choice(FILLER))}</code> here, it isn't needed.</p>\n"
    return body


class Builder:
    def __init__(self, seed):
        self.rng = random.Random(seed)
        self.posts = []
        self.users = {}
        self.next_post = 1
        self.next_user = 1

    def new_user(self, good, created=None):
        rng = self.rng
        uid = self.next_user
        self.next_user += 1
        rep = int(rng.lognormvariate(7.5 if good else 5.0, 1.2)) + 1
        if created is None:
            created = dt.datetime(2008, 9, 1) + dt.timedelta(days=rng.randint(0, 2400), seconds=rng.randint(0, 86399))
        self.users[uid] = (rep, created)
        return uid

    def post_id(self):
        pid = self.next_post
        self.next_post += 1
        return pid

    def question(self, tag, year, n_answers, accepted=True, self_answer=False, unknown_user=False,
                 unregistered=False, answer_before=False, drop_view_count=False, late_signup=False):
        rng = self.rng
        asker = self.new_user(False)
        qid = self.post_id()
        created = dt.datetime(year, 1, 1) + dt.timedelta(days=rng.randint(0, 364), seconds=rng.randint(0, 86399),
                                                           milliseconds=rng.randint(0, 999))
        keywords = rng.sample(TOPIC_WORDS[tag], 6)
        extra_tags = rng.sample(["arrays", "performance", "debugging", "android", "html", "css", "regex"], 2)
        answers = []
        accepted_slot = rng.randrange(n_answers) if accepted else None
        for i in range(n_answers):
            good = i == accepted_slot
            # Soft signal: some unaccepted answers look good and vice versa.
            looks_good = good if rng.random() < 0.8 else not good
            aid = self.post_id()
            owner = self.new_user(looks_good)
            lag = rng.expovariate(1 / (1800 if looks_good else 20000)) + 30
            a_created = created + dt.timedelta(seconds=lag)
            score = max(-3, int(rng.gauss(6 if looks_good else 1, 3)))
            answers.append(dict(Id=aid, PostTypeId=2, ParentId=qid, CreationDate=ts(a_created), Score=score,
                                Body=answer_body(rng, tag, keywords, looks_good), OwnerUserId=owner,
                                CommentCount=rng.randint(0, 6 if looks_good else 3)))
        if self_answer:
            answers[-1]["OwnerUserId"] = asker
        if unknown_user:
            answers[-1]["OwnerUserId"] = 900000 + answers[-1]["Id"]
        if unregistered:
            answers[-1]["OwnerUserId"] = None
        if answer_before:
            answers[-1]["CreationDate"] = ts(created - dt.timedelta(hours=3))
        if late_signup:
            owner = answers[0]["OwnerUserId"]
            rep, _ = self.users[owner]
            self.users[owner] = (rep, created + dt.timedelta(days=30))
        q = dict(Id=qid, PostTypeId=1,
                 AcceptedAnswerId=answers[accepted_slot]["Id"] if accepted_slot is not None else None,
                 CreationDate=ts(created), Score=rng.randint(-1, 25),
                 ViewCount=None if drop_view_count else int(rng.lognormvariate(6, 1.3)),
                 Body=question_body(rng, tag, keywords), OwnerUserId=asker,
                 Title=sentence(rng, keywords + FILLER, 6).capitalize() + "?",
                 Tags="".join(f"<{t}>" for t in [tag] + extra_tags), AnswerCount=n_answers,
                 CommentCount=rng.randint(0, 4))
        self.posts.append(q)
        self.posts.extend(answers)
        return q


def build(seed):
    b = Builder(seed)
    rng = b.rng
    special = {
        3: dict(drop_view_count=True),
        11: dict(late_signup=True),
        17: dict(late_signup=True),
        29: dict(drop_view_count=True),
    }
    retained = 200
    for i in range(retained):
        tag = "java" if rng.random() < 0.5 else "javascript"
        n = rng.choice([2, 2, 3, 3, 3, 4, 4, 5, 6])
        b.question(tag, rng.choice([2014, 2015, 2016]), n, **special.get(i, {}))
    # Discard cases, one reason each.
    b.question("python", 2015, 3)
    b.question("java", 2012, 3)
    b.question("javascript", 2017, 3)
    b.question("java", 2015, 3, accepted=False)
    b.question("java", 2015, 2, self_answer=True)
    b.question("javascript", 2015, 2, unknown_user=True)
    b.question("java", 2016, 2, unregistered=True)
    b.question("javascript", 2014, 1)
    b.question("java", 2014, 3, answer_before=True)
    # A tag wiki excerpt and an orphan answer.
    b.posts.append(dict(Id=b.post_id(), PostTypeId=4, CreationDate="2015-06-01T00:00:00.000", Score=0,
                        Body="<p>Tag wiki excerpt</p>", CommentCount=0))
    b.posts.append(dict(Id=b.post_id(), PostTypeId=2, ParentId=999999, CreationDate="2015-06-01T00:00:00.000",
                        Score=0, Body="<p>orphan</p>", OwnerUserId=1, CommentCount=0))
    # The dump lists posts roughly by id; shuffle a little so answers sometimes precede questions.
    for i in range(0, len(b.posts) - 1, 7):
        b.posts[i], b.posts[i + 1] = b.posts[i + 1], b.posts[i]
    return b


def write(out_dir: Path, b: Builder):
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = ['<?xml version="1.0" encoding="utf-8"?>', "<posts>"]
    lines += [row(**p) for p in b.posts]
    lines.append("</posts>")
    (out_dir / "Posts.xml").write_text("\n".join(lines) + "\n", encoding="utf-8")
    lines = ['<?xml version="1.0" encoding="utf-8"?>', "<users>"]
    for uid, (rep, created) in sorted(b.users.items()):
        lines.append(row(Id=uid, Reputation=rep, CreationDate=ts(created), DisplayName=f"user{uid}",
                         LastAccessDate="2017-01-01T00:00:00.000", Views=0, UpVotes=0, DownVotes=0))
    lines.append("</users>")
    (out_dir / "Users.xml").write_text("\n".join(lines) + "\n", encoding="utf-8")
    config = {
        "seed": 42,
        "paths": {"posts": "Posts.xml", "users": "Users.xml", "workdir": "work"},
        "select": {"ig_threshold": 0.02},
        "search": {"n_iterations": 6, "cv_folds": 4, "n_estimators": [20, 40, 60],
                   "max_depth": [4, 8, 16], "min_samples_split": [2, 5, 8], "min_samples_leaf": [1, 3]},
        "forest": {"n_estimators": 60, "max_depth": 8, "min_samples_split": 8, "min_samples_leaf": 3},
        "mlp": {"hidden": [32, 32, 16, 16, 8], "learning_rate": 0.5, "epochs": 100},
        "importance": {"repeats": 3},
    }
    (out_dir / "run.json").write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "fixtures")
    parser.add_argument("--seed", type=int, default=20140101)
    args = parser.parse_args()
    write(args.out, build(args.seed))


if __name__ == "__main__":
    main()
