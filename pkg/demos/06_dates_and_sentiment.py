"""Document enrichment: regex date extraction and binary sentiment.

Date extraction returns surfaces, offsets and pattern ids only — no
calendar normalization, so "12/03" stays ambiguous on purpose. Sentiment
reuses the deterministic logistic regression, trained on the bundled
review-snippet corpus.
"""

from docpipe.enrich import extract_dates, predict_sentiment, train_default_sentiment_model

TEXT = (
    "The committee approved the plan on 12/03/2024 and scheduled a review "
    "for May 4, 2025. An earlier draft from २१-०४-१९५१ was archived on "
    "2024-03-12, fifty years after 15 August 1947."
)

print(TEXT)
print("\nextracted dates:")
for match in extract_dates(TEXT):
    print(f"  [{match.start:>3}:{match.end:<3}] {match.pattern_id}  {match.surface!r}")

# P1 = numeric D/M/Y or D-M-Y, P2 = ISO, P3 = English month names,
# P4 = the P1/P3 shapes with Devanagari digits.

model = train_default_sentiment_model(seed=42)
print("\nsentiment:")
for text in (
    "The archive tour was absolutely wonderful and beautifully organized.",
    "The reading room was gloomy and the staff were rude.",
    "The committee met at noon.",
):
    label, confidence = predict_sentiment(model, text)
    print(f"  {label:<8} ({confidence:.2f})  {text}")
