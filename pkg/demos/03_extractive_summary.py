"""Deterministic extractive summarization, in English and Hindi.

Sentences are scored by the mean corpus-internal frequency of their content
tokens; the top ceil(ratio * N) sentences come back in document order, so
the whole computation is auditable by hand.
"""

from docpipe import summarizer, textprep
from docpipe.languages import get_language

ENGLISH = (
    "Cricket fans love cricket matches. The stadium was full of fans. "
    "Cricket brings the city together. Local shops sell cricket bats. "
    "The weather stayed clear."
)

HINDI = (
    "नदी किनारे मेला लगा। मेला में मेला देखने लोग आये। "
    "बच्चों ने मेला खूब देखा। शाम को सब घर लौटे।"
)


def summarize(text: str, code: str, ratio: float) -> None:
    language = get_language(code)
    normalized = textprep.normalize(text)
    script = textprep.detect_script(normalized)
    sentences = tuple(textprep.segment_sentences(normalized, script))
    request = summarizer.SummaryRequest(sentences=sentences, language=language,
                                        target_ratio=ratio)

    scores = summarizer.sentence_scores(request)
    print(f"--- {language.display_name}, ratio {ratio} ---")
    for i, sentence in enumerate(sentences):
        print(f"  [{i}] score={scores[i]:.3f}  {sentence.text}")

    summary = summarizer.summarize_extractive(request)
    print(f"selected: {list(summary.selected_indices)}")
    print(f"summary:  {summary.text}")
    print(f"compression: {summary.compression_ratio:.2f}\n")


summarize(ENGLISH, "eng", ratio=0.3)
summarize(HINDI, "hin", ratio=0.3)

# ratio 1.0 keeps the whole document; the selection count is always
# ceil(ratio * sentence_count), capped by max_sentences when given.
summarize(ENGLISH, "eng", ratio=1.0)
