"""tribsum: summarization and blind-review toolkit for tax-court decisions.

Pipeline: parse decisions into canonical sections, summarize them with
classical extractive scorers or prompt-driven LLM calls, verify that
structured output stays grounded in the source text, and run a blind
expert evaluation with mean/(std) reporting.
"""

__version__ = "0.1.0"
