"""
Writing a rule
==============

Rules pair a contextual structure with a Korean template.  This script
parses a small custom rule, shows how it binds on a sentence, and prints
the canonical form of a built-in rule.
"""

from isounit import builtin_catalog, bundled_lexicon, detect_units, format_rule, parse_rules
from isounit import explain_match, tag_sentence

source = '''
// "that is" introduces an apposition which goes after the anchor
rule My-1 nominal {
  pattern: ... ~N:a , <Ih-N> "that is" ~N:x <It> , ... ;
  korean: +<< "다시말하여" $x >> ;
  anchor: a ;
}
'''
(rule,) = parse_rules(source)
print(format_rule(rule))

lexicon = bundled_lexicon()
tokens = tag_sentence(lexicon, "The source, that is the battery, is small.")
unit = detect_units(tokens)[0]
result, failed_at = explain_match(rule, tokens, unit)
for b in result.bindings:
    print(f"{b.name:3s} {b.span} {result.surface(b.name)!r} ({b.role.value})")

# A failing match reports which pattern element it got stuck on.
tokens = tag_sentence(lexicon, "The source, namely the battery, is small.")
result, failed_at = explain_match(rule, tokens, detect_units(tokens)[0])
print("no match; stuck at element", failed_at, "=", rule.pattern[failed_at])

# The built-in catalog, first rule
print(format_rule(builtin_catalog()[0]))
