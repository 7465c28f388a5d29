# SPDX-License-Identifier: Apache-2.0
"""Regenerate the stemmer conformance corpora.

Requires: pip install snowballstemmer wordfreq
Writes stem_en.tsv and stem_es.tsv (word<TAB>stem) next to this script.
"""
import os
import re

import snowballstemmer
import wordfreq

HERE = os.path.dirname(os.path.abspath(__file__))
PATTERNS = {
    "en": re.compile(r"^[a-z']+$"),
    "es": re.compile(r"^[a-zñáéíóúü]+$"),
}
NAMES = {"en": "english", "es": "spanish"}
EXTRA = {
    "en": ["running", "the", "immigrants", "generously", "skies", "dying",
           "hysterical", "welcome", "stupid", "women", "building", "aggressive"],
    "es": ["niñas", "inmigrantes", "mujeres", "odio", "construyendo", "agresivo"],
}


def main():
    for lang, pat in PATTERNS.items():
        stemmer = snowballstemmer.stemmer(NAMES[lang])
        words = list(dict.fromkeys(EXTRA[lang] + [
            w for w in wordfreq.top_n_list(lang, 12000)
            if pat.match(w) and len(w) >= 2]))[:4000]
        with open(os.path.join(HERE, f"stem_{lang}.tsv"), "w", encoding="utf-8") as f:
            f.write(f"# snowball {NAMES[lang]} reference stems (snowballstemmer "
                    f"{getattr(snowballstemmer, '__version__', '3.x')})\n")
            for w in words:
                f.write(f"{w}\t{stemmer.stemWord(w)}\n")


if __name__ == "__main__":
    main()
