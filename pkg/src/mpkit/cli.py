"""Command line front end.

Subcommands: self-verifying worked-example demos with Octave-compatible
matrix output, a plain-text matrix file loader, the residual/oracle QA
suite runner, the flop-rate benchmark runner, and small drivers for
inversion, symmetric eigendecomposition, SVD, and real Schur form.

Matrix file format: a header line "m n", then m rows of n
whitespace-separated decimal tokens (row-major); blank lines between
rows are ignored.  Tokens are parsed at the active precision
(dd_from_string for dd, float for f64) and defects are reported as
file:line:column.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, testkit
from .bench import ROUTINES as BENCH_ROUTINES
from .bench import emit_csv as bench_emit_csv
from .bench import run_bench
from .ddarith import (DDComplex, DDouble, TWO_PROD_SCHEME, dd_from_string,
                      dd_sqrt, dd_sub, dd_to_string, format_f64,
                      machine_params)
from .mpblas import Cgemm, Matrix, Rgemm, Vector, resolve_threads
from .mplapack import Rgees, Rgesvd, Rgetrf, Rgetri, Rsyev, workspace_query

DEMO_NAMES = ("rgemm", "cgemm", "rsyev", "rgees", "rgesvd", "hilbert")
SHORT_DIGITS = 17  # "%+.16e", the classic printnum short form
LONG_DIGITS = 33


class MatrixFileError(ValueError):
    """Raised for malformed matrix files; message carries file:line:col."""


# ---------------------------------------------------------------------------
# Octave-style text

def _fmt_real(v, digits):
    if isinstance(v, DDouble):
        return dd_to_string(v, digits)
    return format_f64(float(v), digits)


def _fmt_elem(v, digits):
    if isinstance(v, DDComplex):
        return _fmt_real(v.re, digits) + _fmt_real(v.im, digits) + "i"
    if isinstance(v, complex):
        return _fmt_real(v.real, digits) + _fmt_real(v.imag, digits) + "i"
    return _fmt_real(v, digits)


def print_octave(mat, digits=SHORT_DIGITS):
    """One-line Octave/Matlab literal "[ [ a, b]; [ c, d] ]"."""
    rows = []
    for i in range(mat.m):
        cells = ", ".join(_fmt_elem(mat.get(i, j), digits)
                          for j in range(mat.n))
        rows.append("[ " + cells + "]")
    if not rows:
        return "[ ]"
    return "[ " + "; ".join(rows) + " ]"


def _vec_text(values, digits=SHORT_DIGITS):
    return "[ " + ", ".join(_fmt_elem(v, digits) for v in values) + "]"


# ---------------------------------------------------------------------------
# matrix files

def read_matrix_file(path, precision="dd"):
    """Load a Matrix from the plain-text format described above."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise MatrixFileError(f"{path}: {exc.strerror or exc}") from None
    if not lines or not lines[0].split():
        raise MatrixFileError(f"{path}:1:1: missing 'm n' header line")
    head = lines[0].split()
    if len(head) != 2:
        raise MatrixFileError(
            f"{path}:1:1: header must be 'm n', found {len(head)} token(s)")
    try:
        m, n = int(head[0]), int(head[1])
    except ValueError:
        raise MatrixFileError(
            f"{path}:1:1: header must be two integers") from None
    if m < 0 or n < 0:
        raise MatrixFileError(f"{path}:1:1: dimensions must be >= 0")
    rows = []
    li = 1
    while len(rows) < m:
        if li >= len(lines):
            raise MatrixFileError(
                f"{path}:{len(lines)}:1: expected {m} data row(s), "
                f"found {len(rows)}")
        lineno = li + 1
        toks = lines[li].split()
        li += 1
        if not toks:
            continue
        if len(toks) != n:
            raise MatrixFileError(
                f"{path}:{lineno}:1: expected {n} token(s), "
                f"found {len(toks)}")
        vals = []
        for col, tok in enumerate(toks, start=1):
            try:
                vals.append(dd_from_string(tok) if precision == "dd"
                            else float(tok))
            except ValueError:
                raise MatrixFileError(
                    f"{path}:{lineno}:{col}: bad numeric token "
                    f"{tok!r}") from None
        rows.append(vals)
    for extra in range(li, len(lines)):
        if lines[extra].split():
            raise MatrixFileError(
                f"{path}:{extra + 1}:1: unexpected extra data")
    if m == 0 or n == 0:
        return Matrix(m, n, precision)
    return Matrix.from_rows(rows, precision)


# ---------------------------------------------------------------------------
# demos (each runs the worked instance at dd and self-checks; the exit
# status is the acceptance signal)

_EPS_DD = float(machine_params("dd").eps)

# exact rational alpha*A*B + beta*C over the binary64-converted inputs,
# rounded to 45 significant digits
_CGEMM_EXPECT = (
    ("+1.94120000000000004298783551348606100854474662e+2",
     "-3.99199999999999974154007986726355107849130590e+1"),
    ("-3.24401999999999997896557579757370522203068766e+2",
     "-1.91934000000000009682407653421876148215955910e+2"),
    ("+2.35524229999999999972593268059671537493691656e+2",
     "-3.97979335999999951355570750998608180519233066e+1"),
    ("-1.82399999999999990163424001821112972960532899e+2",
     "-2.59700000000000009370282327836321082846315496e+2"),
    ("-1.18304000000000004897915406587571901338270363e+2",
     "+8.01400000000000031229185903924871089808143019e+1"),
    ("+2.95156519999999999675198527390035318137789363e+2",
     "-1.07685699999999996618236126075598876574458722e+2"),
    ("-1.14000000000000003330669073875469621270895004e+2",
     "+2.89799999999999997157829056959599256515502930e+2"),
    ("-7.91019999999999996612570773990569239105996919e+1",
     "+1.69399999999999890819279979581324297882161476e+0"),
    ("-1.79719949999999999106813422240606958499987755e+2",
     "+1.56296485999999999526101746353222443256839650e+2"),
)


def _demo_rgemm():
    n = 3
    a = Matrix.from_rows([[1, 8, 3], [0, 10, 8], [9, -5, -1]], "dd")
    b = Matrix.from_rows([[9, 8, 3], [3, -11, 0], [-8, 6, 1]], "dd")
    c = Matrix.from_rows([[3, 3, 0], [8, 4, 8], [6, 1, -2]], "dd")
    alpha, beta = 3.0, -2.0
    print("# Rgemm demo...")
    print("A =" + print_octave(a))
    print("B =" + print_octave(b))
    print("C =" + print_octave(c))
    Rgemm("N", "N", n, n, n, alpha, a, a.ld, b, b.ld, beta, c, c.ld)
    print("alpha = " + _fmt_real(alpha, SHORT_DIGITS))
    print("beta  = " + _fmt_real(beta, SHORT_DIGITS))
    print("ans =" + print_octave(c))
    print("#please check by Matlab or Octave following and ans above")
    print("alpha * A * B + beta * C")
    expect = [[21, -192, 18], [-118, -194, 8], [210, 361, 82]]
    bad = []
    for i in range(n):
        for j in range(n):
            got = c.get(i, j)
            if got.hi != float(expect[i][j]) or got.lo != 0.0:
                bad.append(f"MISMATCH ans({i},{j}): got {got} "
                           f"expected {expect[i][j]}")
    for line in bad:
        print(line)
    return 1 if bad else 0


def _demo_cgemm():
    n = 3
    a = Matrix.from_rows(
        [[complex(1, -1), complex(8, 2.2), complex(0, -10)],
         [complex(2, 0), complex(10, 0), complex(8.1, 2.2)],
         [complex(-9, 3), complex(-5, 3), complex(-1, 0)]], "cdd")
    b = Matrix.from_rows(
        [[complex(9, 0), complex(8, -0.01), complex(3, 1.001)],
         [complex(3, -8), complex(-11, 0.1), complex(8, 0.00001)],
         [complex(-8, 1), complex(6, 0), complex(1.1, 1)]], "cdd")
    c = Matrix.from_rows(
        [[complex(3, 1), complex(-3, 9.99), complex(-9, -11)],
         [complex(8, -1), complex(4, 4.44), complex(8, 9)],
         [complex(6, 0), complex(-1, 0), complex(-2, 1)]], "cdd")
    alpha, beta = complex(3, -1.2), complex(-2, -2)
    print("# Cgemm demo...")
    print("a =" + print_octave(a, LONG_DIGITS))
    print("b =" + print_octave(b, LONG_DIGITS))
    print("c =" + print_octave(c, LONG_DIGITS))
    Cgemm("N", "N", n, n, n, alpha, a, a.ld, b, b.ld, beta, c, c.ld)
    print("alpha = " + _fmt_elem(alpha, LONG_DIGITS))
    print("beta = " + _fmt_elem(beta, LONG_DIGITS))
    print("ans =" + print_octave(c, LONG_DIGITS))
    print("#please check by Matlab or Octave following and ans above")
    print("alpha * a * b + beta * c")
    tol = 1e-28
    bad = []
    for idx in range(n * n):
        i, j = divmod(idx, n)
        got = c.get(i, j)
        er = dd_from_string(_CGEMM_EXPECT[idx][0])
        ei = dd_from_string(_CGEMM_EXPECT[idx][1])
        dre = abs(float(dd_sub(got.re, er)))
        dim = abs(float(dd_sub(got.im, ei)))
        if dre > tol or dim > tol:
            bad.append(f"MISMATCH ans({i},{j}): |d_re|={dre:.3e} "
                       f"|d_im|={dim:.3e} tolerance {tol:.0e}")
    for line in bad:
        print(line)
    return 1 if bad else 0


def _demo_rsyev():
    n = 4
    a = Matrix.from_rows([[5, 4, 1, 1], [4, 5, 1, 1],
                          [1, 1, 4, 2], [1, 1, 2, 4]], "dd")
    print("# Rsyev demo...")
    print("A =" + print_octave(a))
    v = a.copy()
    w = Vector(n, "dd")
    lwork = workspace_query("Rsyev", n)
    _, info = Rsyev("V", "U", n, v, v.ld, w, Vector(lwork, "dd"), lwork)
    if info != 0:
        print(f"MISMATCH: Rsyev info={info}")
        return 1
    print("#eigenvalues")
    print("w =" + print_octave(
        Matrix.from_rows([[w.get(i)] for i in range(n)], "dd")))
    print("#eigenvecs")
    print("U =" + print_octave(v))
    print("#you can check eigenvalues using octave/Matlab by:")
    print("eig(A)")
    print("#you can check eigenvectors using octave/Matlab by:")
    print("U'*A*U")
    expect = [1.0, 2.0, 5.0, 10.0]
    bad = []
    for i in range(n):
        diff = abs(float(dd_sub(w.get(i), DDouble(expect[i]))))
        if diff > 100.0 * _EPS_DD * expect[i]:
            bad.append(f"MISMATCH w({i}): got {w.get(i)} "
                       f"expected {expect[i]:g}")
    for line in bad:
        print(line)
    return 1 if bad else 0


def _demo_rgees():
    n = 4
    a = Matrix.from_rows([[-2, 2, 2, 2], [-3, 3, 2, 2],
                          [-2, 0, 4, 2], [-1, 0, 0, 5]], "dd")
    print("# Rgees demo...")
    print("A =" + print_octave(a))
    t = a.copy()
    res, info = Rgees("V", n, t, t.ld)
    if info != 0:
        print(f"MISMATCH: Rgees info={info}")
        return 1
    print("#eigenvalues")
    print("w =" + _vec_text([DDComplex(res.wr.get(i), res.wi.get(i))
                             for i in range(n)]))
    print("#Schur form")
    print("T =" + print_octave(res.T))
    print("#Schur vectors")
    print("Z =" + print_octave(res.Z))
    print("#you can check the factorization using octave/Matlab by:")
    print("Z*T*Z'")
    expect = [1.0, 2.0, 3.0, 4.0]
    got = sorted(range(n), key=lambda i: float(res.wr.get(i)))
    bad = []
    for pos, i in enumerate(got):
        dre = abs(float(dd_sub(res.wr.get(i), DDouble(expect[pos]))))
        if dre > 100.0 * _EPS_DD * expect[pos] or float(res.wi.get(i)) != 0.0:
            bad.append(f"MISMATCH w({i}): got {res.wr.get(i)}+{res.wi.get(i)}i "
                       f"expected {expect[pos]:g}")
    for rep in testkit.residual_schur(a, res.T, res.Z):
        if not rep.passed:
            bad.append("MISMATCH " + rep.line())
    for line in bad:
        print(line)
    return 1 if bad else 0


def _demo_rgesvd():
    m, n = 4, 5
    a = Matrix.from_rows([[1, 0, 0, 0, 2], [0, 0, 3, 0, 0],
                          [0, 0, 0, 0, 0], [0, 2, 0, 0, 0]], "dd")
    print("# Rgesvd demo...")
    print("# octave check")
    print("a =" + print_octave(a))
    work = a.copy()
    res, info = Rgesvd("A", "A", m, n, work, work.ld)
    if info != 0:
        print(f"MISMATCH: Rgesvd info={info}")
        return 1
    k = min(m, n)
    print("s =" + _vec_text([res.s.get(i) for i in range(k)]))
    print("u =" + print_octave(res.U))
    print("vt =" + print_octave(res.VT))
    print("svd(a)")
    print("padding=zeros(%d,%d)" % (k, n - m))
    print("sigma=[diag(s) padding]")
    print("u * sigma * vt")
    anorm = 3.0  # largest row sum of |A|
    expect = [DDouble(3.0), dd_sqrt(DDouble(5.0)), DDouble(2.0), None]
    bad = []
    for i in range(k):
        got = res.s.get(i)
        if expect[i] is None:
            if abs(float(got)) > 100.0 * _EPS_DD * anorm:
                bad.append(f"MISMATCH s({i}): got {got} expected 0")
        else:
            diff = abs(float(dd_sub(got, expect[i])))
            if diff > 100.0 * _EPS_DD * float(expect[i]):
                bad.append(f"MISMATCH s({i}): got {got} "
                           f"expected {expect[i]}")
    for rep in testkit.residual_svd(a, res.s, res.U, res.VT):
        if not rep.passed:
            bad.append("MISMATCH " + rep.line())
    for line in bad:
        print(line)
    return 1 if bad else 0


def _demo_hilbert():
    print("# Rgetri Hilbert demo...")
    nmax = 8
    results = {}
    for precision in ("dd", "f64"):
        print(f"# precision {precision}")
        results[precision] = testkit.hilbert_infnorm_study(nmax, precision)
        for n, val in results[precision]:
            if val is None:
                print(f"InfnormL:(ainv * a - I)=FAILED (n={n})")
            else:
                print("InfnormL:(ainv * a - I)=" +
                      _fmt_real(val, SHORT_DIGITS))
    bad = []
    ddv = [v for _, v in results["dd"]]
    f64v = [v for _, v in results["f64"]]
    if any(v is None for v in ddv + f64v):
        bad.append("MISMATCH: inversion failed")
    else:
        if float(ddv[0]) != 0.0:
            bad.append(f"MISMATCH dd n=1: {ddv[0]} expected exact 0")
        for i in range(1, nmax):
            if float(ddv[i]) >= 1e-20:
                bad.append(f"MISMATCH dd n={i + 1}: {ddv[i]} not < 1e-20")
        if f64v[nmax - 1] <= 1e-13:
            bad.append(f"MISMATCH f64 n={nmax}: {f64v[nmax - 1]} "
                       "not > 1e-13")
    for line in bad:
        print(line)
    return 1 if bad else 0


_DEMOS = {
    "rgemm": _demo_rgemm,
    "cgemm": _demo_cgemm,
    "rsyev": _demo_rsyev,
    "rgees": _demo_rgees,
    "rgesvd": _demo_rgesvd,
    "hilbert": _demo_hilbert,
}


# ---------------------------------------------------------------------------
# subcommand drivers

def _cmd_demo(args):
    return _DEMOS[args.name]()


def _cmd_qa(args):
    sizes = tuple(s for s in testkit.SUITE_SIZES if s <= args.nmax)
    if not sizes:
        print("error: --nmax excludes every suite size", file=sys.stderr)
        return 2
    routines = None
    if args.routine is not None:
        if args.routine not in testkit.COMPARE_ROUTINES:
            print(f"error: unknown routine {args.routine!r}; choices: "
                  + ", ".join(testkit.COMPARE_ROUTINES), file=sys.stderr)
            return 2
        routines = (args.routine,)
    reports = testkit.run_suite(seeds=range(args.seeds), sizes=sizes,
                                csv_path=args.csv, text=sys.stdout,
                                routines=routines)
    failures = sum(1 for r in reports if not r.passed)
    print(f"# {len(reports)} checks, {failures} failures")
    return 0 if failures == 0 else 1


def _cmd_bench(args):
    if args.nmin < 1 or args.nmax < args.nmin or args.step < 1:
        print("error: need 1 <= nmin <= nmax and step >= 1",
              file=sys.stderr)
        return 2
    threads = args.threads if args.threads is not None else resolve_threads()
    sizes = range(args.nmin, args.nmax + 1, args.step)
    try:
        stream = run_bench(args.routine, args.precision, sizes,
                           threads=threads)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print("routine,precision,n,k,threads,elapsed_s,mflops")
    records = []
    for r in stream:
        records.append(r)
        print(",".join([r.routine, r.precision, str(r.n),
                        "" if r.k is None else str(r.k), str(r.threads),
                        repr(r.elapsed_s), repr(r.mflops)]))
        sys.stdout.flush()
    if args.csv:
        bench_emit_csv(records, args.csv)
    return 0


def _cmd_invert(args):
    a = read_matrix_file(args.file, args.precision)
    if a.m != a.n:
        print(f"error: matrix must be square, got {a.m}x{a.n}",
              file=sys.stderr)
        return 1
    n = a.m
    print("a =" + print_octave(a))
    lu = a.copy()
    ipiv, info = Rgetrf(n, n, lu)
    if info == 0:
        lwork = workspace_query("Rgetri", n)
        info = Rgetri(n, lu, lu.ld, ipiv, Vector(lwork, args.precision),
                      lwork)
    if info != 0:
        print(f"error: matrix is singular (zero pivot at {info})",
              file=sys.stderr)
        return 1
    print("ainv =" + print_octave(lu))
    if n:
        print("InfnormL:(ainv * a - I)=" +
              _fmt_real(testkit.left_residual_infnorm(a, lu),
                        SHORT_DIGITS))
    return 0


def _cmd_eig(args):
    a = read_matrix_file(args.file, args.precision)
    if a.m != a.n:
        print(f"error: matrix must be square, got {a.m}x{a.n}",
              file=sys.stderr)
        return 1
    n = a.m
    print("A =" + print_octave(a))
    v = a.copy()
    w = Vector(n, args.precision)
    lwork = workspace_query("Rsyev", n)
    _, info = Rsyev("V", "U", n, v, v.ld, w, Vector(lwork, args.precision),
                    lwork)
    if info != 0:
        print(f"error: eigensolver failed (info={info})", file=sys.stderr)
        return 1
    print("w =" + _vec_text([w.get(i) for i in range(n)]))
    print("U =" + print_octave(v))
    return 0


def _cmd_svd(args):
    a = read_matrix_file(args.file, args.precision)
    print("a =" + print_octave(a))
    work = a.copy()
    res, info = Rgesvd("A", "A", a.m, a.n, work, work.ld)
    if info != 0:
        print(f"error: SVD failed to converge (info={info})",
              file=sys.stderr)
        return 1
    print("s =" + _vec_text([res.s.get(i)
                             for i in range(min(a.m, a.n))]))
    print("u =" + print_octave(res.U))
    print("vt =" + print_octave(res.VT))
    return 0


def _cmd_schur(args):
    a = read_matrix_file(args.file, args.precision)
    if a.m != a.n:
        print(f"error: matrix must be square, got {a.m}x{a.n}",
              file=sys.stderr)
        return 1
    n = a.m
    print("A =" + print_octave(a))
    t = a.copy()
    res, info = Rgees("V", n, t, t.ld)
    if info != 0:
        print(f"error: Schur iteration failed (info={info})",
              file=sys.stderr)
        return 1
    if args.precision == "dd":
        w = [DDComplex(res.wr.get(i), res.wi.get(i)) for i in range(n)]
    else:
        w = [complex(res.wr.get(i), res.wi.get(i)) for i in range(n)]
    print("w =" + _vec_text(w))
    print("T =" + print_octave(res.T))
    print("Z =" + print_octave(res.Z))
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser():
    p = argparse.ArgumentParser(
        prog="mpkit",
        description="precision-generic dense linear algebra kit "
                    "(binary64 and double-double)")
    p.add_argument("--version", action="version",
                   version=f"mpkit {__version__} "
                           f"(two_prod: {TWO_PROD_SCHEME})")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("demo", help="run a self-verifying worked example")
    d.add_argument("name", choices=DEMO_NAMES)
    d.set_defaults(func=_cmd_demo)

    q = sub.add_parser("qa", help="run the residual/oracle QA suite")
    q.add_argument("--seeds", type=int, default=1, metavar="K",
                   help="number of seeds (0..K-1, default 1)")
    q.add_argument("--nmax", type=int, default=50,
                   help="largest suite size to include (default 50)")
    q.add_argument("--routine", default=None,
                   help="restrict to one kernel's oracle comparison")
    q.add_argument("--csv", default=None, metavar="PATH",
                   help="also write report CSV (and a PNG next to it)")
    q.set_defaults(func=_cmd_qa)

    b = sub.add_parser("bench", help="time kernels and report MFlops")
    b.add_argument("--routine", required=True, choices=BENCH_ROUTINES)
    b.add_argument("--precision", required=True, choices=("f64", "dd"))
    b.add_argument("--nmin", type=int, required=True)
    b.add_argument("--nmax", type=int, required=True)
    b.add_argument("--step", type=int, required=True)
    b.add_argument("--threads", type=int, default=None,
                   help="thread count (default: MPKIT_THREADS or 1)")
    b.add_argument("--csv", default=None, metavar="PATH",
                   help="also write CSV (and a PNG next to it)")
    b.set_defaults(func=_cmd_bench)

    for name, fn, helptext in (
            ("invert", _cmd_invert, "invert a matrix from a file"),
            ("eig", _cmd_eig,
             "symmetric eigendecomposition (upper triangle referenced)"),
            ("svd", _cmd_svd, "singular value decomposition"),
            ("schur", _cmd_schur, "real Schur decomposition")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--file", required=True, metavar="M.txt")
        s.add_argument("--precision", default="dd", choices=("f64", "dd"))
        s.set_defaults(func=fn)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MatrixFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
