import os

from hypothesis import settings


settings.register_profile('default', max_examples=40, deadline=None)
settings.register_profile('ci', max_examples=200, deadline=None, derandomize=True)
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'default'))


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: solver runs that take more than a few seconds')
