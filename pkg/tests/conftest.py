from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import SUMMARY
    if SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in SUMMARY:
            terminalreporter.write_line(line)
