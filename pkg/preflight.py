import os
import platform
import psutil
from math import comb

# Rough cost of one sparse matrix entry with Laurent coefficients, in bytes.
BYTES_PER_ENTRY = 512
SOLVER_COMMANDS = ("te-aut", "der-basis", "xi-check", "glue", "inverse-check")

def get_cpu_info():
    cpu_count = os.cpu_count()
    cpu_freq = psutil.cpu_freq()
    cpu_model = platform.processor() or platform.uname().processor
    return {
        'cpu_count': cpu_count,
        'cpu_freq': cpu_freq.current if cpu_freq else None,
        'cpu_model': cpu_model,
    }

def get_memory_info():
    mem = psutil.virtual_memory()
    return {
        'total': mem.total,
        'available': mem.available,
        'used': mem.used,
        'percent': mem.percent,
    }

def monomial_bound(ngens, cap):
    # monomials in ngens variables of total degree <= cap
    return comb(ngens + cap, cap)

def estimate_unknowns(ws, command, args, cap):
    """Upper bound on the number of linear unknowns a solver command sets up."""
    if command not in SOLVER_COMMANDS:
        return 0
    if command == 'glue':
        c = ws.cover(args[0])
        return monomial_bound(c.base.ngens, cap)
    if command == 'inverse-check' and len(args) < 2:
        return 0
    if command == 'der-basis':
        a = ws.algebra(args[0])
        return a.ngens * monomial_bound(a.ngens, cap)
    space = ws.algebra(args[0])
    stage = ws.algebra(args[1])
    te = space.ngens * monomial_bound(space.ngens + stage.ngens, cap)
    if command == 'xi-check':
        return te + stage.ngens * space.ngens * monomial_bound(space.ngens + stage.ngens, cap)
    return te

def estimate_memory(unknowns):
    # elimination fill-in is bounded by a dense square system
    return unknowns * unknowns * BYTES_PER_ENTRY

def preflight_summary(ws, command, args, cap, max_unknowns):
    unknowns = estimate_unknowns(ws, command, args, cap)
    needed = estimate_memory(unknowns)
    mem = get_memory_info()
    warnings = []
    if unknowns > max_unknowns:
        warnings.append(f"about {unknowns} unknowns at cap {cap} exceeds max_unknowns={max_unknowns}; consider a lower --cap")
    if needed > mem['available']:
        warnings.append(f"elimination may need {needed // (1024**2)} MB but only {mem['available'] // (1024**2)} MB are available")
    return {
        'command': command,
        'cap': cap,
        'unknowns': unknowns,
        'memory_needed': needed,
        'memory': mem,
        'cpu': get_cpu_info(),
        'warnings': warnings,
        'ok': not warnings,
    }

def print_preflight_report(summary):
    cpu = summary['cpu']
    mem = summary['memory']
    print(f"\n🚀  ===== Pre-flight check: {summary['command']} at cap {summary['cap']} ===== 🚀\n")
    print(f"🖥️  CPU: {cpu['cpu_model']} | Cores: {cpu['cpu_count']}")
    print(f"💾 RAM: {mem['total'] // (1024**3)} GB total | {mem['available'] // (1024**3)} GB available")
    print(f"🔢 Unknowns (upper bound): {summary['unknowns']}")
    print(f"📐 Estimated elimination memory: {summary['memory_needed'] // (1024**2)} MB")
    for w in summary['warnings']:
        print(f"⚠️  {w}")
    print()


if __name__ == "__main__":
    import sys
    from workspace import load_workspace
    if len(sys.argv) < 3:
        print("Usage: python preflight.py <workspace> <command> [args...] [--cap N]")
        print("Example: python preflight.py sphere.toric te-aut F K --cap 3")
        sys.exit(1)

    argv = sys.argv[1:]
    cap = 4
    if '--cap' in argv:
        k = argv.index('--cap')
        cap = int(argv[k + 1])
        del argv[k:k + 2]
    with open(argv[0], encoding='utf-8') as f:
        ws = load_workspace(f.read())
    summary = preflight_summary(ws, argv[1], argv[2:], cap, max_unknowns=5000)
    print_preflight_report(summary)
    sys.exit(0 if summary['ok'] else 1)
