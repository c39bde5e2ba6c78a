"""Reference tokenization for the tokenizer regression test.

Splits the paragraph into sentences at [.!?] followed by whitespace (the
Treebank tokenizer only separates a sentence-final period), runs NLTK's
TreebankWordTokenizer on each sentence, lowercases, and maps the Treebank
quote tokens back to plain ASCII quotes. Writes one token per line.
"""
import re
import sys

from nltk.tokenize import TreebankWordTokenizer


def main(src, dst):
    text = open(src, encoding="utf-8").read().strip()
    sentences = re.split(r'(?<=[.!?])\s+|(?<=[.!?]["\)])\s+', text)
    tok = TreebankWordTokenizer()
    out = []
    for s in sentences:
        for t in tok.tokenize(s):
            t = {"``": '"', "''": '"', "`": "'"}.get(t, t)
            out.append(t.lower())
    with open(dst, "w", encoding="utf-8") as f:
        f.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
