import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    # one visible pass/fail line per acceptance criterion
    if report.when == "call" and item.module.__name__.endswith("test_acceptance"):
        label = item.name.removeprefix("test_")
        status = "PASS" if report.passed else "FAIL"
        capman = item.config.pluginmanager.getplugin("capturemanager")
        if capman:
            with capman.global_and_fixture_disabled():
                print(f"\n[acceptance] {label}: {status} ({report.duration:.1f}s)")
        else:
            print(f"\n[acceptance] {label}: {status} ({report.duration:.1f}s)")
