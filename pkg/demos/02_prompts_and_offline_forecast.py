"""
From numbers to prompts and back
================================

Language models see a series as text. This walks through the digit
encoding, the natural-language paraphrase, the knowledge prefix, and a
full forecast round trip against an offline stand-in for a model.
"""

# %%
from tsllm.codec import decode_digits, encode_digits, paraphrase, rescale_for_tokens, reverse_paraphrase
from tsllm.forecasters import ForecastRequest, FunctionBackend, PromptOptions, Sampling, forecast
from tsllm.harness import load_bundled
from tsllm.prompts import build_knowledge_prompt, default_registry
from tsllm.series import train_test_split

air, _ = load_bundled("AirPassengersDataset")
train, test = train_test_split(air, 0.8)

# %%
# Digits are spaced so each becomes its own token; the decimal point is dropped.
print(encode_digits([0.123, 1.23, 12.3, 123.0], 2).text)
print(decode_digits("1 2, 1 2 3", 2))

# %%
# Large values are first divided so the 95th percentile lands near 1.
scaled, scale = rescale_for_tokens(train.values)
enc = encode_digits(scaled, 2, scale=scale)
print("divisor", round(scale.divisor, 2), "->", enc.text[:40], "...")

# %%
# The paraphrase describes each step as a rise, fall or stay, and reverses exactly.
para = paraphrase(train.values[:4], "passenger count", 0)
print(para.text)
print(reverse_paraphrase(para.text))

# %%
# A knowledge prompt is the dataset description followed by the plain prompt.
bundle = build_knowledge_prompt("AirPassengersDataset", default_registry(), enc, len(test))
print(bundle.user_text[:160], "...")

# %%
# Any callable can play the model. This one answers with last year's cycle,
# written in the same digit format, so the decode path is exercised end to end.
def last_cycle(bundle, index):
    last = scaled[-12:]
    reps = -(-len(test) // 12)
    return encode_digits(list(last) * reps, 2).text

req = ForecastRequest(train, len(test), prompt=PromptOptions(knowledge_key="AirPassengersDataset"),
                      sampling=Sampling(num_samples=3))
res = forecast(req, FunctionBackend(last_cycle, "last-cycle"))
print("first forecast values:", res.point[:4].round(1), "actual:", test.values[:4])

# %%
# A real model is reached through ChatCompletionBackend. The key is read from
# an environment variable (TSLLM_API_KEY by default), never from a file:
#
#   export TSLLM_API_KEY=...
#   backend = ChatCompletionBackend("https://host/v1/chat/completions", "model-name",
#                                   cache=ResponseCache("runs/cache"))
