"""
Choosing particle allomorphs
============================

Korean particles come in pairs whose choice depends on whether the
preceding syllable ends in a consonant (batchim).  The generator decides
this arithmetically from the syllable's code point.
"""

from isounit.generator import glue, has_batchim, join_korean, select_josa
from isounit.ruledsl import JosaAlt

for word in ["협조", "봉사들", "클래스씨휘케이슌", "길", "I_3"]:
    last = word[-1]
    print(word, "batchim" if has_batchim(last) else "open",
          select_josa(word, JosaAlt("과", "와")),
          select_josa(word, JosaAlt("은", "는")),
          select_josa(word, JosaAlt("으로", "로")))

# Bound forms in the lexicon and templates start with "-" and are glued on
# when pieces are joined.  A leading final-consonant jamo closes an open
# syllable.
print(join_korean(["협조", "-과/와", "고무"]))
print(join_korean(["옴의 법칙", "-에 따라"]))
print(glue("알려지", "ㄴ"), glue("지적되", "ㄴ다 해도"))
