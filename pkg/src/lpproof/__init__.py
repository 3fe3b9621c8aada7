"""Translate superposition refutation traces into Dedukti proof scripts and check them."""
from .dk import parse_dk, print_dk
from .drv import parse_trace, print_trace
from .embedding import emit_prelude
from .kernel import check_document
from .translate import TranslationError, Translator, translate_trace

__all__ = ["parse_dk", "print_dk", "parse_trace", "print_trace", "emit_prelude",
           "check_document", "TranslationError", "Translator", "translate_trace",
           "translate_and_check"]


def translate_and_check(trace_text: str, budget: int = 10 ** 7):
    """Translate a trace, print it, re-read the text and check it.

    Returns ``(script, dedukti text, check report)``.
    """
    script = translate_trace(parse_trace(trace_text))
    text = print_dk(script.items())
    return script, text, check_document(parse_dk(text), budget=budget)
