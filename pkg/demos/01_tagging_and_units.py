"""
Tagging a sentence and finding candidate units
==============================================

A sentence is tokenized, each token gets its grammatical categories from
the lexicon, and every comma-, dash- or bracket-delimited span becomes a
candidate isolated unit.
"""

from isounit import bundled_lexicon, detect_units, tag_sentence
from isounit.units import UnitType, annotate, render_annotated

lexicon = bundled_lexicon()
sentence = ("Lastly, only through the collaboration and encouragement by Muriel, "
            "my wife, has this project been completed.")

tokens = tag_sentence(lexicon, sentence)
for tok in tokens:
    cats = ",".join(sorted(c.value for c in tok.categories)) or "-"
    print(f"{tok.position:2d}  {tok.surface:15s} {cats:10s} {tok.korean_root or ''}")

# Capitalized nouns also carry CLBN, which rule N-1 asks for right before
# the unit.  The detector over-generates: both comma spans are candidates.
units = detect_units(tokens)
for unit in units:
    print(unit.span, unit.text(tokens))

# Once a rule accepts a candidate its type is known and the head and tail
# markers can be shown in place.
print(render_annotated(annotate(tokens, units[1], UnitType.NOMINAL)))
