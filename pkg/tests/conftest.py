def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: multi-minute Monte Carlo sweeps (acceptance criteria 6-8)"
    )
