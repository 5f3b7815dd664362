#Setup script for the Poly-Bergman Workbench

import sys
import subprocess
from pathlib import Path

def check_requirements():
    # Check if all required dependencies are installed.
    print("📋 Checking requirements...")
    try:
        import numpy
        import scipy
        import fastapi
        import pydantic
        print("✅ All required packages are installed")
        return True
    except ImportError as e:
        print(f"❌ Missing dependency: {e}")
        print("Please run: pip install -r requirements.txt")
        return False

def check_environment():
    # Validate the DISC_* settings, from .env when present.
    print("\n🔧 Checking environment configuration...")

    if not Path(".env").exists():
        print("ℹ️  No .env file found, using defaults (see .env.example)")

    from polybergman.config import config
    is_valid, errors = config.validate_config()
    if not is_valid:
        for error in errors:
            print(f"❌ {error}")
        return False

    print(f"✅ Configuration OK (quadrature {config.RADIAL_NODES}x{config.ANGULAR_NODES}, tol {config.CHECK_TOL:g})")
    return True

def write_ledger():
    # Produce derivation_ledger.json with the default settings.
    print("\n🗂️  Writing derivation ledger...")

    from polybergman.cli import main as cli_main
    code = cli_main(["ledger"])
    if code == 0:
        print("✅ derivation_ledger.json written")
        return True
    print(f"❌ Ledger run exited with code {code}")
    return False

def run_tests():
    # Run the test suite to verify setup.
    print("\n🧪 Running test suite...")

    try:
        result = subprocess.run([
            sys.executable, "-m", "pytest", "polybergman", "-q", "--tb=short"
        ], capture_output=True, text=True)

        if result.returncode == 0:
            print("✅ Tests passed")
            return True
        else:
            print(f"❌ Some tests failed:")
            print(result.stdout)
            print(result.stderr)
            return False
    except Exception as e:
        print(f"❌ Error running tests: {e}")
        return False

def main():
    """Main setup function."""
    print("🚀 Poly-Bergman Workbench Setup")
    print("=" * 50)

    if not check_requirements():
        sys.exit(1)

    if not check_environment():
        sys.exit(1)

    print("\n📊 Would you like to write the derivation ledger now?")
    answer = input("This evaluates every ledger oracle at gamma = 0 (y/n): ").lower().strip()
    if answer == 'y':
        if not write_ledger():
            print("\n⚠️  Ledger run failed; rerun with: python -m polybergman ledger")
    else:
        print("⏭️  Skipping ledger")

    print("\n🧪 Would you like to run the tests?")
    answer = input("This runs pytest on polybergman/ (y/n): ").lower().strip()
    if answer == 'y':
        run_tests()
    else:
        print("⏭️  Skipping tests")

    print("\n🎉 Setup complete!")
    print("\nNext steps:")
    print("1. Try the CLI: python -m polybergman kernel --gamma 1 --n 3")
    print("2. Start the API server: python main.py")
    print("3. Visit http://localhost:8000/docs for the API documentation")

if __name__ == "__main__":
    main()
