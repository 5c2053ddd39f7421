from hypothesis import settings

# Property suites are reproducible: the same examples on every run.
settings.register_profile('verify', max_examples=1000, derandomize=True, deadline=None)
settings.load_profile('verify')
