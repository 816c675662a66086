"""Build a mixed-language plain-text corpus from word-frequency tables.

Words are drawn from the published unigram frequencies of eight
Indo-European languages (wordfreq 3.1.1 'large'/'small' lists), assembled
into capitalised, punctuated sentences and paragraphs. Seeded; rerunning
reproduces the file byte for byte given the same wordfreq release.
"""
import math, collections, random, sys
import wordfreq

LANGS = ["en", "fr", "de", "es", "it", "pt", "nl", "sv"]
PER_LANG = 66 * 1024
ELIDE = {"fr": {"l", "d", "j", "n", "s", "c", "qu", "m", "t"}, "it": {"l", "d", "un", "all", "dell", "nell"}}

rng = random.Random(20101111)
out = []
for lang in LANGS:
    words = wordfreq.top_n_list(lang, 20000)
    weights = [wordfreq.word_frequency(w, lang) for w in words]
    text = []
    size = 0
    while size < PER_LANG:
        para = []
        for _ in range(rng.randint(3, 7)):
            n = rng.randint(6, 22)
            toks = rng.choices(words, weights, k=n)
            s = ""
            for i, t in enumerate(toks):
                if i == 0:
                    s = t
                elif s.split(" ")[-1] in ELIDE.get(lang, ()):
                    s += "'" + t
                elif rng.random() < 0.07:
                    s += ", " + t
                else:
                    s += " " + t
            para.append(s[0].upper() + s[1:] + rng.choice([".", ".", ".", ".", "?", "!", ";"]).rstrip(";"))
        p = " ".join(para)
        text.append(p)
        size += len(p.encode()) + 2
    out.append("\n\n".join(text))
data = ("\n\n".join(out) + "\n").encode("utf-8")
sys.stdout.buffer.write(data)
c = collections.Counter(data)
N = len(data)
print(N, -sum(v / N * math.log2(v / N) for v in c.values()), file=sys.stderr)
