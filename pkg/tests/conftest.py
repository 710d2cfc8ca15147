def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance as acc
    except ImportError:
        return
    if not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acc.RESULTS):
        ok, detail = acc.RESULTS[number]
        terminalreporter.write_line(acc.format_line(number, ok, detail))
