"""
Translating the sample sentences
================================

Runs the full pipeline over the sample text and prints, for each sentence,
the selected rule, the rendered segment and the assembled output.
"""

from pathlib import Path

from isounit import Engine, translate_document

here = Path(__file__).resolve().parent.parent
text = (here / "samples" / "paper_sentences.txt").read_text(encoding="utf-8")

engine = Engine.create()
for result in translate_document(engine, text):
    print(f"[{result.id}] {result.input}")
    for m in result.trace.matches:
        print(f"    {m['rule']:5s} {m['segment']['dir']:5s} {m['segment']['text']}")
    print("   ", result.output)
    for w in result.trace.warnings:
        print("    warning:", w)
    print()

# The same document with four worker threads gives identical records.
parallel = [r.output for r in translate_document(engine, text, workers=4)]
assert parallel == [r.output for r in translate_document(engine, text)]
