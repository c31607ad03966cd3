"""Method-id registry, import-light for CLI startup.

The scorer classes live in tribsum.extractive (which pulls numpy and
scikit-learn); commands that only need to name methods import the ids
from here instead. A test pins these ids to the actual registries.
"""

CLASSICAL_METHOD_IDS = ("lexrank", "textrank", "lsa", "luhn", "freq")
LLM_METHOD_IDS = ("llm-extractive", "llm-flowing", "llm-issues")
KNOWN_METHODS = CLASSICAL_METHOD_IDS + LLM_METHOD_IDS
