from bellcert import config


def test_defaults_are_valid():
    assert config.validate_config()


def test_invalid_setting_is_reported(monkeypatch, caplog):
    monkeypatch.setattr(config, "DEFAULT_JOBS", 0)
    assert not config.validate_config()
    assert "BELL_JOBS" in caplog.text


def test_unknown_log_level(monkeypatch):
    monkeypatch.setattr(config, "LOG_LEVEL", "LOUD")
    assert not config.validate_config()


def test_int_env_falls_back_on_garbage(monkeypatch):
    monkeypatch.setenv("BELL_TEST_VALUE", "many")
    assert config._int_env("BELL_TEST_VALUE", 7) == 7
    monkeypatch.setenv("BELL_TEST_VALUE", "12")
    assert config._int_env("BELL_TEST_VALUE", 7) == 12
    monkeypatch.delenv("BELL_TEST_VALUE")
    assert config._int_env("BELL_TEST_VALUE", 7) == 7
