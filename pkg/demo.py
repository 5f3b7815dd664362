#!/usr/bin/env python3
# Demo script for the Poly-Bergman Workbench
# Walks through the main checks: cross-representation evaluation, Gram
# orthogonality, series against closed-form kernels and true-space projection.

import json
import sys
from typing import Dict, Any
import dotenv

# Load environment variables
dotenv.load_dotenv()


def demo_check(command: str, argv: list, description: str = "") -> Dict[Any, Any]:
    # Run a single workbench check and print its headline numbers.
    print(f"\n{'='*60}")
    print(f"🔍 DEMO: {description or command}")
    print(f"{'='*60}")
    print(f"Command: python -m polybergman {command} {' '.join(argv)}")
    print("-" * 60)

    try:
        from polybergman.cli import HANDLERS, build_parser, run_config_from_args

        args = build_parser().parse_args([command, *argv])
        exit_code, report = HANDLERS[command](run_config_from_args(args))

        print("\n📋 RESULTS:")
        print("-" * 40)
        for key in ("max_deviation", "max_offdiag", "max_diag_rel_error", "max_rel_deviation",
                    "bergman_max_rel_deviation", "pythagoras_rel_error", "orthogonality", "coefficient_error"):
            if key in report:
                print(f"  {key}: {report[key]:.3e}")
        if "origin" in report:
            print(f"  K_n(0,0): {report['origin']['closed'][0]:.12f} (expected {report['origin']['expected']:.12f})")
        if "membership" in report:
            verdicts = ", ".join(f"n={m['n']}: {'yes' if m['member'] else 'no'}" for m in report["membership"])
            print(f"  membership: {verdicts}")
        print(f"\n{'✅ passed' if exit_code == 0 else '❌ failed'} (exit code {exit_code})")

        report.pop("table", None)
        return report

    except Exception as e:
        print(f"❌ Error during demo: {e}")
        import traceback
        print(f"Traceback: {traceback.format_exc()}")
        return {"command": command, "error": str(e)}


def run_demo():
    # Run every showcase check in turn.
    print("🚀 Poly-Bergman Workbench Demo")
    print("="*80)

    demo_checks = [
        {
            "command": "eval",
            "argv": ["--gamma", "1.5", "--m", "5", "--n", "3", "--rep", "jacobi,sum,rodrigues", "--grid", "4,8"],
            "description": "Jacobi, explicit-sum and Rodrigues forms agree",
        },
        {
            "command": "gram",
            "argv": ["--gamma", "-0.5", "--max-m", "6", "--max-n", "6"],
            "description": "Orthogonality of disc polynomials at gamma = -0.5",
        },
        {
            "command": "kernel",
            "argv": ["--gamma", "1", "--n", "3"],
            "description": "True poly-Bergman kernel: series against closed form",
        },
        {
            "command": "project",
            "argv": ["--gamma", "0.5", "--input", "random:3,6", "--seed", "7"],
            "description": "Decomposition of a random polyanalytic function",
        },
        {
            "command": "project",
            "argv": ["--input", "2*R(2,1) - (0.5+1j)*z^2*zbar + (1-|z|^2)^2", "--n", "1"],
            "description": "Projection of a mixed expression onto the first true space",
        },
    ]

    results = []
    for i, check in enumerate(demo_checks, 1):
        print(f"\n🎯 Running Demo {i}/{len(demo_checks)}")
        results.append(demo_check(check["command"], check["argv"], check["description"]))

    print(f"\n{'='*80}")
    print("📊 DEMO SUMMARY")
    print(f"{'='*80}")
    passed = sum(1 for r in results if r.get("passed"))
    print(f"📋 Checks run: {len(results)}")
    print(f"✅ Passed: {passed}")
    print(f"❌ Failed: {len(results) - passed}")

    return results


def main():
    # Main function to run the demo.
    print("Starting Poly-Bergman Workbench Demo...")

    try:
        results = run_demo()

        # Optional: Save results to file
        print(f"\n💾 Would you like to save the demo results to a file? (y/n): ", end="")
        save_results = input().lower().strip()

        if save_results == 'y':
            with open('demo_results.json', 'w') as f:
                json.dump(results, f, indent=2, sort_keys=True)
            print("📁 Results saved to demo_results.json")

    except KeyboardInterrupt:
        print("\n⏹️  Demo interrupted by user")
    except Exception as e:
        print(f"\n❌ Demo failed: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
