"""Wall-clock timings for checking, compiling and running the example corpus.

Run with ``python python/benchmarks/impg_benchmark.py``.
"""

import time

from impg import corpus
from impg.compiler import compile_program
from impg.forest import Leaf
from impg.refeval import Base, eval_ref
from impg.typecheck import tc_program
from impg.vm import Machine


def benchmark_check(program, rounds=50):
    start_time = time.time()
    for _ in range(rounds):
        tc_program(program)
    end_time = time.time()
    return (end_time - start_time) / rounds


def benchmark_compile(program, optimize, rounds=50):
    start_time = time.time()
    for _ in range(rounds):
        compile_program(program, optimize=optimize)
    end_time = time.time()
    return (end_time - start_time) / rounds


def benchmark_machine(program, name, d, optimize):
    compiled = compile_program(program, optimize=optimize)
    machine = Machine(compiled)
    start_time = time.time()
    machine.run(compiled.code_of(name), d)
    end_time = time.time()
    return end_time - start_time, machine.steps


def benchmark_reference(program, name, v):
    compiled = compile_program(program)
    start_time = time.time()
    eval_ref(compiled.find(name).arrow, v, compiled)
    end_time = time.time()
    return end_time - start_time


if __name__ == "__main__":
    fact = corpus.load("fact")
    add = corpus.load("add")

    for name in ("fact", "add", "primrec", "minim", "nested_call"):
        program = corpus.load(name)
        print(f"{name}: check {benchmark_check(program) * 1e3:.3f} ms, "
              f"compile {benchmark_compile(program, True) * 1e3:.3f} ms "
              f"({benchmark_compile(program, False) * 1e3:.3f} ms without peephole)")

    print("Benchmarking the forest machine...")
    for optimize in (True, False):
        elapsed, steps = benchmark_machine(add, "add", (Leaf(1), Leaf(100_000)), optimize)
        label = "optimized" if optimize else "unoptimized"
        print(f"add 1 100000 ({label}): {elapsed:.6f} seconds, {steps} iterations")
    elapsed, steps = benchmark_machine(fact, "fact", (Leaf(300),), True)
    print(f"fact 300: {elapsed:.6f} seconds, {steps} iterations")

    print("Benchmarking the reference evaluator...")
    print(f"fact 300: {benchmark_reference(fact, 'fact', Base(300)):.6f} seconds")
