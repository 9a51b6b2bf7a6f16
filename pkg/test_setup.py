"""Quick test script to verify the nilsoliton setup"""
import json
import sys

import jsonschema


def test_imports():
    """Test that all modules can be imported"""
    print("Testing imports...")
    from config import Config  # noqa: F401
    from logger import get_logger  # noqa: F401
    from ring import Scalar, parse_scalar  # noqa: F401
    from forms import KForm, VectorField, SymTensor2  # noqa: F401
    from catalog import metric, families  # noqa: F401
    from curvature import ricci, frame_connection_matrix  # noqa: F401
    from soliton import solve_soliton, check_theorem  # noqa: F401
    from flow import integrate  # noqa: F401
    from report import Report  # noqa: F401
    from main import main  # noqa: F401
    print("✅ All imports successful!")


def test_config(monkeypatch):
    """Test configuration"""
    print("\nTesting configuration...")
    from config import Config

    monkeypatch.setenv("NILSOLITON_ORACLE_POINTS", "7")
    monkeypatch.setenv("NILSOLITON_ORACLE_SEED", "11")
    monkeypatch.setenv("NILSOLITON_VALIDATE_REPORTS", "false")
    monkeypatch.setenv("NILSOLITON_LOG_LEVEL", "debug")
    config = Config.from_env()
    assert config.ORACLE_POINTS == 7
    assert config.ORACLE_SEED == 11
    assert config.VALIDATE_REPORTS is False
    assert config.LOG_LEVEL == "DEBUG"
    assert config.FLOW_STEP == 1e-3
    assert config.to_dict()["oracle_points"] == 7
    print("✅ Configuration loaded!")


def test_logger(capsys):
    """Test logger"""
    print("\nTesting logger...")
    from logger import get_logger

    logger = get_logger()
    assert logger is get_logger()
    logger.info("Test info message")
    logger.success("Test success message")
    logger.check("Test check", True)
    captured = capsys.readouterr()
    assert "Test info message" not in captured.out
    print("✅ Logger working!")


def test_data_files():
    """Test that the fixtures and the report schema load"""
    print("\nTesting data files...")
    from utils import load_fixtures, load_schema

    fixtures = load_fixtures()
    assert fixtures["fixture_version"] == 1
    assert sorted(fixtures["theorems"], key=int) == ["2", "3", "4", "5", "7", "8"]
    jsonschema.Draft7Validator.check_schema(load_schema())
    print("✅ Data files valid!")


def test_version_in_reports():
    from nilsoliton import __version__
    from report import Report

    data = Report("check").to_dict()
    assert data["tool_version"] == __version__
    assert data["schema_version"] == 1
    json.dumps(data)


def main():
    """Run the checks without pytest"""
    print("=" * 60)
    print("NILSOLITON - SETUP VERIFICATION")
    print("=" * 60)

    import pytest
    return pytest.main([__file__, "-q"])


if __name__ == "__main__":
    sys.exit(main())
