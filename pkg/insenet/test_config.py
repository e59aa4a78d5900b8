import pytest

from .config import DEFAULT_LADDERS, CliConfig, load_config
from .errors import ConfigurationError


def test_defaults():
    config = load_config(environ={})
    assert config == CliConfig()
    assert config.ladders == DEFAULT_LADDERS
    assert config.gammatone_config().n_bands == 32
    assert config.gammatone_config().window_ms == 80.0


def test_precedence_file_env_flag(tmp_path):
    config_file = tmp_path / "insenet.env"
    config_file.write_text("INSENET_LEARNING_RATE=0.001\nINSENET_EPOCHS=7\nINSENET_SEED=3\n")
    from_file = load_config(config_file, environ={})
    assert from_file.learning_rate == 0.001
    assert from_file.epochs == 7

    from_env = load_config(config_file, environ={"INSENET_EPOCHS": "9"})
    assert from_env.epochs == 9
    assert from_env.learning_rate == 0.001

    from_flag = load_config(config_file, environ={"INSENET_EPOCHS": "9"}, overrides={"epochs": 11, "seed": None})
    assert from_flag.epochs == 11
    assert from_flag.seed == 3


def test_codec_commands_and_ladders(tmp_path):
    config_file = tmp_path / "insenet.env"
    config_file.write_text(
        'INSENET_CODEC_HEAAC="fdkaac {input} -o {output} -b {bitrate}"\n'
        "INSENET_LADDER_HEAAC=32,16,24\n"
        "INSENET_ORACLE=visqol --ref {ref} --deg {deg}\n"
    )
    config = load_config(config_file, environ={})
    assert config.codec_commands == {"heaac": "fdkaac {input} -o {output} -b {bitrate}"}
    assert config.ladders["heaac"] == [16, 24, 32]
    assert config.ladders["aac"] == DEFAULT_LADDERS["aac"]
    assert config.oracle_command == "visqol --ref {ref} --deg {deg}"


def test_unknown_and_invalid_keys(tmp_path):
    config_file = tmp_path / "insenet.env"
    config_file.write_text("INSENET_LEARNIN_RATE=0.1\n")
    with pytest.raises(ConfigurationError, match="INSENET_LEARNIN_RATE"):
        load_config(config_file, environ={})
    with pytest.raises(ConfigurationError):
        load_config(environ={"INSENET_BATCH_SIZE": "many"})
    with pytest.raises(ConfigurationError):
        load_config(environ={"INSENET_LADDER_AAC": "96,fast"})
    with pytest.raises(ConfigurationError):
        load_config(environ={}, overrides={"colour": "red"})


def test_unrelated_environment_is_ignored():
    config = load_config(environ={"INSENET_NOT_A_SETTING": "1", "PATH": "/bin"})
    assert config == CliConfig()


def test_output_dir_from_environment(tmp_path):
    config_file = tmp_path / "insenet.env"
    config_file.write_text("INSENET_OUTPUT_DIR=runs/from_file\n")
    assert load_config(config_file, environ={}).output_dir == "runs/from_file"
    assert load_config(config_file, environ={"INSENET_OUTPUT_DIR": "runs/from_env"}).output_dir == "runs/from_env"
