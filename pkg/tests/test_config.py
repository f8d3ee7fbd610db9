import pytest

from impg.config import DEFAULT_BUDGET, Settings
from impg.errors import ConfigError


class TestSettings:
    def test_defaults(self):
        settings = Settings.from_env({})
        assert settings == Settings()
        assert settings.budget == DEFAULT_BUDGET
        assert settings.optimize and not settings.exhaustive

    def test_environment(self):
        settings = Settings.from_env(
            {"IMPG_BUDGET": "25", "IMPG_EXHAUSTIVE": "yes", "IMPG_STRICT_DATA": "1", "IMPG_TRACE": "off"}
        )
        assert settings.budget == 25
        assert settings.exhaustive
        assert settings.strict_data
        assert not settings.trace

    @pytest.mark.parametrize(
        "env",
        [{"IMPG_BUDGET": "lots"}, {"IMPG_BUDGET": "-1"}, {"IMPG_TRACE": "maybe"}],
    )
    def test_rejected(self, env):
        with pytest.raises(ConfigError):
            Settings.from_env(env)

    def test_overrides_skip_none(self):
        settings = Settings(budget=7).replace(budget=None, optimize=False)
        assert settings.budget == 7
        assert not settings.optimize

    def test_negative_override(self):
        with pytest.raises(ConfigError):
            Settings().replace(budget=-5)
