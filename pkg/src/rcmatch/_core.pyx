# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels.

Every routine here follows its counterpart in ``multigraph``, ``reduce`` and
``_pykernels`` operation for operation (same swap-remove order, same random
draws), so both backends produce identical logs for the same seed.
"""
from libc.stdint cimport int8_t, int16_t, int64_t, uint64_t
from libcpp.vector cimport vector

import numpy as np

from ._pykernels import InconsistentLog

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t rc_next(uint64_t *s) {
        uint64_t z = (*s += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    static inline uint64_t rc_below(uint64_t *s, uint64_t n) {
        uint64_t threshold = (0 - n) % n;
        uint64_t x;
        do { x = rc_next(s); } while (x < threshold);
        return x % n;
    }
    """
    uint64_t rc_next(uint64_t *s) nogil
    uint64_t rc_below(uint64_t *s, uint64_t n) nogil

cdef enum:
    VZ = 0
    ONE = 1
    CON = 2
    MER = 3
    AUTO = 4

cdef enum:
    K_INITIAL = 0
    K_T1 = 1
    K_T2 = 2
    K_T3A = 3
    K_T3B = 4
    K_T3C = 5
    K_T4 = 6
    K_BAD = 7

_MASK = (1 << 64) - 1


cdef class _Engine:
    cdef vector[vector[int64_t]] inc
    cdef vector[char] alive
    cdef vector[int64_t] bpos, ea, eb, pa, pb
    cdef vector[vector[int64_t]] buckets
    cdef int64_t nv, m, mind, maxd
    # action log
    cdef vector[int8_t] kinds
    cdef vector[int64_t] offsets, payload
    cdef uint64_t rng
    cdef bint match_double

    def __init__(self, ea, eb, inc_off, inc_data, alive, bucket_off, bucket_data, int64_t num_edges):
        cdef const int64_t[::1] v_ea = np.ascontiguousarray(ea, dtype=np.int64)
        cdef const int64_t[::1] v_eb = np.ascontiguousarray(eb, dtype=np.int64)
        cdef const int64_t[::1] v_io = np.ascontiguousarray(inc_off, dtype=np.int64)
        cdef const int64_t[::1] v_id = np.ascontiguousarray(inc_data, dtype=np.int64)
        cdef const unsigned char[::1] v_al = np.ascontiguousarray(alive, dtype=np.uint8)
        cdef const int64_t[::1] v_bo = np.ascontiguousarray(bucket_off, dtype=np.int64)
        cdef const int64_t[::1] v_bd = np.ascontiguousarray(bucket_data, dtype=np.int64)
        cdef Py_ssize_t ne = v_ea.shape[0], nvid = v_al.shape[0], nb = v_bo.shape[0] - 1
        cdef Py_ssize_t v, i, d, e
        self.ea.resize(ne)
        self.eb.resize(ne)
        for e in range(ne):
            self.ea[e] = v_ea[e]
            self.eb[e] = v_eb[e]
        self.pa.assign(ne, -1)
        self.pb.assign(ne, -1)
        self.inc.resize(nvid)
        self.alive.resize(nvid)
        self.bpos.assign(nvid, -1)
        self.nv = 0
        for v in range(nvid):
            self.alive[v] = v_al[v]
            self.nv += v_al[v]
            for i in range(v_io[v], v_io[v + 1]):
                e = v_id[i]
                if self.ea[e] == v:
                    self.pa[e] = i - v_io[v]
                else:
                    self.pb[e] = i - v_io[v]
                self.inc[v].push_back(e)
        self.buckets.resize(nb if nb > 0 else 1)
        for d in range(nb):
            for i in range(v_bo[d], v_bo[d + 1]):
                self.bpos[v_bd[i]] = i - v_bo[d]
                self.buckets[d].push_back(v_bd[i])
        self.m = num_edges
        self.mind = 0
        self.maxd = <int64_t>self.buckets.size() - 1
        self.offsets.push_back(0)
        self.match_double = True

    # -- buckets and incidence ------------------------------------------------

    cdef inline void bucket_add(self, int64_t v, int64_t d) noexcept:
        while <int64_t>self.buckets.size() <= d:
            self.buckets.push_back(vector[int64_t]())
        self.bpos[v] = self.buckets[d].size()
        self.buckets[d].push_back(v)
        if d > self.maxd:
            self.maxd = d
        if d < self.mind:
            self.mind = d

    cdef inline void bucket_remove(self, int64_t v, int64_t d) noexcept:
        cdef vector[int64_t]* b = &self.buckets[d]
        cdef int64_t i = self.bpos[v]
        cdef int64_t last = b.back()
        b.pop_back()
        if last != v:
            b[0][i] = last
            self.bpos[last] = i
        self.bpos[v] = -1

    cdef inline void bucket_move(self, int64_t v, int64_t old, int64_t new) noexcept:
        self.bucket_remove(v, old)
        self.bucket_add(v, new)

    cdef inline void inc_remove(self, int64_t e, int64_t v, int64_t pos) noexcept:
        cdef vector[int64_t]* lst = &self.inc[v]
        cdef int64_t last = lst.back()
        lst.pop_back()
        if last != e:
            lst[0][pos] = last
            if self.ea[last] == v:
                self.pa[last] = pos
            else:
                self.pb[last] = pos

    cdef inline int64_t other(self, int64_t e, int64_t v) noexcept:
        cdef int64_t a = self.ea[e]
        return self.eb[e] if a == v else a

    cdef void remove_edge(self, int64_t e) noexcept:
        cdef int64_t a = self.ea[e], b = self.eb[e], da, db
        self.inc_remove(e, a, self.pa[e])
        self.inc_remove(e, b, self.pb[e])
        self.ea[e] = -1
        self.eb[e] = -1
        self.m -= 1
        da = self.inc[a].size()
        self.bucket_move(a, da + 1, da)
        db = self.inc[b].size()
        self.bucket_move(b, db + 1, db)

    cdef inline void remove_vertex(self, int64_t v) noexcept:
        self.bucket_remove(v, 0)
        self.alive[v] = 0
        self.nv -= 1

    cdef inline int64_t min_degree(self) noexcept:
        cdef int64_t d = self.mind
        while self.buckets[d].empty():
            d += 1
        self.mind = d
        return d

    cdef inline int64_t max_degree(self) noexcept:
        cdef int64_t d = self.maxd
        while self.buckets[d].empty():
            d -= 1
        self.maxd = d
        return d

    cdef inline int64_t pick(self, int64_t d) noexcept:
        cdef vector[int64_t]* b = &self.buckets[d]
        return b[0][rc_below(&self.rng, b.size())]

    # -- log framing ------------------------------------------------------------

    cdef inline void begin(self, int8_t code) noexcept:
        self.kinds.push_back(code)

    cdef inline void end(self) noexcept:
        self.offsets.push_back(self.payload.size())

    cdef void clear_log(self) noexcept:
        self.kinds.clear()
        self.offsets.clear()
        self.offsets.push_back(0)
        self.payload.clear()

    # -- actions ------------------------------------------------------------------

    cdef void contract(self, int64_t* S, int ns) noexcept:
        """Append ``new nS S.. ndrop (f a b).. nabs (f s)..`` and contract."""
        cdef vector[int64_t] abs_e, abs_s, internal
        cdef vector[int64_t]* lst
        cdef int i, j, r, ro
        cdef int64_t s, e, o, vc
        cdef size_t t
        for i in range(ns):
            s = S[i]
            lst = &self.inc[s]
            for t in range(lst.size()):
                e = lst[0][t]
                o = self.eb[e] if self.ea[e] == s else self.ea[e]
                ro = -1
                for r in range(ns):
                    if S[r] == o:
                        ro = r
                        break
                if ro < 0:
                    abs_e.push_back(e)
                    abs_s.push_back(s)
                elif i < ro:
                    internal.push_back(e)
        for i in range(ns):
            s = S[i]
            self.bucket_remove(s, self.inc[s].size())
            self.inc[s].clear()
            self.alive[s] = 0
        self.nv -= ns
        vc = self.inc.size()
        self.payload.push_back(vc)
        self.payload.push_back(ns)
        for i in range(ns):
            self.payload.push_back(S[i])
        self.payload.push_back(internal.size())
        for t in range(internal.size()):
            e = internal[t]
            self.payload.push_back(e)
            self.payload.push_back(self.ea[e])
            self.payload.push_back(self.eb[e])
            self.ea[e] = -1
            self.eb[e] = -1
        self.m -= internal.size()
        self.inc.push_back(vector[int64_t]())
        self.alive.push_back(1)
        self.bpos.push_back(-1)
        lst = &self.inc[vc]
        for t in range(abs_e.size()):
            e = abs_e[t]
            if self.ea[e] == abs_s[t]:
                self.ea[e] = vc
                self.pa[e] = lst.size()
            else:
                self.eb[e] = vc
                self.pb[e] = lst.size()
            lst.push_back(e)
        self.nv += 1
        self.bucket_add(vc, lst.size())
        self.payload.push_back(abs_e.size())
        for t in range(abs_e.size()):
            self.payload.push_back(abs_e[t])
            self.payload.push_back(abs_s[t])

    cdef void match_pair(self, int64_t v, int64_t w, int64_t e) noexcept:
        cdef vector[int64_t] copy = self.inc[w]
        cdef size_t t
        cdef int64_t f
        self.begin(ONE)
        self.payload.push_back(v)
        self.payload.push_back(w)
        self.payload.push_back(e)
        self.payload.push_back(copy.size())
        for t in range(copy.size()):
            f = copy[t]
            self.payload.push_back(f)
            self.payload.push_back(self.ea[f])
            self.payload.push_back(self.eb[f])
            self.remove_edge(f)
        self.remove_vertex(v)
        self.remove_vertex(w)
        self.end()

    cdef void step(self) noexcept:
        cdef int64_t d = self.min_degree()
        cdef int64_t v, u, w, e, e1, e2, a, b, f1, f2, dv, du
        cdef int64_t S[3]
        cdef vector[int64_t]* lst
        if d == 0:
            v = self.pick(0)
            self.remove_vertex(v)
            self.begin(VZ)
            self.payload.push_back(v)
            self.end()
        elif d == 1:
            v = self.pick(1)
            e = self.inc[v][0]
            self.match_pair(v, self.other(e, v), e)
        elif d == 2:
            v = self.pick(2)
            e1 = self.inc[v][0]
            e2 = self.inc[v][1]
            a = self.other(e1, v)
            b = self.other(e2, v)
            if a == b and self.match_double:
                self.match_pair(v, a, e1 if rc_below(&self.rng, 2) == 0 else e2)
                return
            self.begin(CON)
            self.payload.push_back(v)
            self.payload.push_back(e1)
            self.payload.push_back(a)
            self.payload.push_back(e2)
            self.payload.push_back(b)
            S[0] = v
            S[1] = a
            S[2] = b
            self.contract(S, 2 if a == b else 3)
            self.end()
        else:
            v = self.pick(self.max_degree())
            lst = &self.inc[v]
            e = lst[0][rc_below(&self.rng, lst.size())]
            u = self.other(e, v)
            dv = self.inc[v].size()
            du = self.inc[u].size()
            self.remove_edge(e)
            self.begin(MER)
            self.payload.push_back(v)
            self.payload.push_back(u)
            self.payload.push_back(e)
            self.payload.push_back(dv)
            self.payload.push_back(du)
            self.end()
            if self.inc[u].size() == 2:
                f1 = self.inc[u][0]
                f2 = self.inc[u][1]
                w = self.other(f1, u)
                if w == v and self.match_double:
                    if self.other(f2, u) == w:
                        self.match_pair(u, v, f1 if rc_below(&self.rng, 2) == 0 else f2)
                elif self.other(f2, u) == w:
                    self.begin(AUTO)
                    self.payload.push_back(u)
                    self.payload.push_back(v)
                    self.payload.push_back(w)
                    self.payload.push_back(f1)
                    self.payload.push_back(f2)
                    self.payload.push_back(e)
                    S[0] = u
                    S[1] = v
                    S[2] = w
                    self.contract(S, 2 if w == v else 3)
                    self.end()

    # -- classification -------------------------------------------------------

    cdef int classify(self, Py_ssize_t lo, Py_ssize_t hi) noexcept:
        cdef Py_ssize_t n = hi - lo, j
        cdef int64_t o, t, ns, eta1 = 0, eta2 = 0, new1 = -1, con2 = -1
        if n == 1:
            return K_T1
        if n == 2 and self.kinds[lo + 1] == AUTO:
            o = self.offsets[lo + 1]
            return K_T2 if self.payload[o + 7] == 3 else K_BAD
        for j in range(lo + 1, hi):
            if self.kinds[j] != CON or self.payload[self.offsets[j] + 6] != 3:
                return K_BAD
        if n > 3:
            return K_BAD
        o = self.offsets[lo + 1]
        t = o + 5
        ns = self.payload[t + 1]
        eta1 = self.payload[t + 2 + ns] - 2
        new1 = self.payload[t]
        if n == 2:
            if eta1 == 0:
                return K_T3A
            return K_T3B if eta1 == 1 else K_T3C
        o = self.offsets[lo + 2]
        t = o + 5
        ns = self.payload[t + 1]
        eta2 = self.payload[t + 2 + ns] - 2
        con2 = self.payload[o]
        if eta1 == 0 and eta2 == 0:
            return K_T4
        if eta1 == 1 and eta2 == 0 and con2 == new1:
            return K_T4
        return K_BAD

    # -- trace rows -------------------------------------------------------------

    cdef void row(self, vector[int64_t]* rows, int64_t k, int64_t kind, bint check) except *:
        cdef int64_t lo, hi, d, ell, j, total, acc
        cdef vector[int64_t] sizes
        rows.push_back(self.kinds.size())
        rows.push_back(self.nv)
        if self.nv == 0:
            for j in range(3 + (k + 2) + (k - 2)):
                rows.push_back(0)
            rows.push_back(kind)
            return
        rows.push_back(self.m)
        lo = self.min_degree()
        hi = self.max_degree()
        rows.push_back(lo)
        rows.push_back(hi)
        total = 0
        for d in range(k + 1):
            j = self.buckets[d].size() if d <= hi else 0
            total += j
            rows.push_back(j)
        rows.push_back(self.nv - total)
        for ell in range(3, k + 1):
            acc = 0
            for d in range(ell + 1, hi + 1):
                acc += (d - ell) * <int64_t>self.buckets[d].size()
            rows.push_back(acc)
            if check and acc != self.full_excess(ell):
                raise AssertionError(f"excess {ell} mismatch")
        rows.push_back(kind)

    cdef int64_t full_excess(self, int64_t ell):
        cdef int64_t acc = 0, d
        cdef size_t v
        for v in range(self.inc.size()):
            if self.alive[v]:
                d = self.inc[v].size()
                if d > ell:
                    acc += d - ell
        return acc

    cdef void check_invariants(self) except *:
        cdef size_t v, i
        cdef int64_t e, a, b, nv = 0, degsum = 0, live = 0, inb = 0, d
        for v in range(self.inc.size()):
            if not self.alive[v]:
                if self.bpos[v] != -1 or not self.inc[v].empty():
                    raise AssertionError(f"dead vertex {v} still indexed")
                continue
            nv += 1
            d = self.inc[v].size()
            degsum += d
            if self.buckets[d][self.bpos[v]] != <int64_t>v:
                raise AssertionError(f"bucket of {v}")
            for i in range(self.inc[v].size()):
                e = self.inc[v][i]
                a = self.ea[e]
                b = self.eb[e]
                if a == b:
                    raise AssertionError(f"loop {e}")
                if a == <int64_t>v:
                    if self.pa[e] != <int64_t>i:
                        raise AssertionError(f"position of {e}")
                elif b != <int64_t>v or self.pb[e] != <int64_t>i:
                    raise AssertionError(f"position of {e}")
        for i in range(self.ea.size()):
            live += self.ea[i] >= 0
        for i in range(self.buckets.size()):
            inb += self.buckets[i].size()
        if nv != self.nv or live != self.m or degsum != 2 * self.m or inb != nv:
            raise AssertionError("vertex/edge counts out of sync")

    # -- undo ---------------------------------------------------------------------

    cdef inline void restore_vertex(self, int64_t v) noexcept:
        self.alive[v] = 1
        self.nv += 1
        self.bucket_add(v, 0)

    cdef void restore_edge(self, int64_t e, int64_t a, int64_t b) noexcept:
        cdef vector[int64_t]* la = &self.inc[a]
        cdef vector[int64_t]* lb
        self.ea[e] = a
        self.eb[e] = b
        self.pa[e] = la.size()
        la.push_back(e)
        lb = &self.inc[b]
        self.pb[e] = lb.size()
        lb.push_back(e)
        self.m += 1
        self.bucket_move(a, la.size() - 1, la.size())
        self.bucket_move(b, lb.size() - 1, lb.size())

    cdef void detach(self, int64_t e, int64_t old, int64_t new) noexcept:
        cdef vector[int64_t]* lst
        cdef int64_t d_old
        if self.ea[e] == old:
            self.inc_remove(e, old, self.pa[e])
            self.ea[e] = new
            lst = &self.inc[new]
            self.pa[e] = lst.size()
        else:
            self.inc_remove(e, old, self.pb[e])
            self.eb[e] = new
            lst = &self.inc[new]
            self.pb[e] = lst.size()
        lst.push_back(e)
        d_old = self.inc[old].size()
        self.bucket_move(old, d_old + 1, d_old)
        self.bucket_move(new, lst.size() - 1, lst.size())

    cdef void drop_last_vertex(self, int64_t v) noexcept:
        self.bucket_remove(v, 0)
        self.inc.pop_back()
        self.alive.pop_back()
        self.bpos.pop_back()
        self.nv -= 1

    cdef void undo_log(self) noexcept:
        cdef Py_ssize_t i, j
        cdef int64_t o, t, ns, nd, at, na, new, r
        for i in range(<Py_ssize_t>self.kinds.size() - 1, -1, -1):
            o = self.offsets[i]
            if self.kinds[i] == VZ:
                self.restore_vertex(self.payload[o])
            elif self.kinds[i] == ONE:
                self.restore_vertex(self.payload[o])
                self.restore_vertex(self.payload[o + 1])
                r = self.payload[o + 3]
                for j in range(r - 1, -1, -1):
                    t = o + 4 + 3 * j
                    self.restore_edge(self.payload[t], self.payload[t + 1], self.payload[t + 2])
            elif self.kinds[i] == MER:
                self.restore_edge(self.payload[o + 2], self.payload[o], self.payload[o + 1])
            else:
                t = o + (5 if self.kinds[i] == CON else 6)
                new = self.payload[t]
                ns = self.payload[t + 1]
                for j in range(ns):
                    self.restore_vertex(self.payload[t + 2 + j])
                at = t + 2 + ns
                nd = self.payload[at]
                na = self.payload[at + 1 + 3 * nd]
                for j in range(na):
                    self.detach(self.payload[at + 2 + 3 * nd + 2 * j], new, self.payload[at + 3 + 3 * nd + 2 * j])
                for j in range(nd):
                    self.restore_edge(self.payload[at + 1 + 3 * j], self.payload[at + 2 + 3 * j], self.payload[at + 3 + 3 * j])
                self.drop_last_vertex(new)

    # -- drivers ------------------------------------------------------------------

    cdef object run(self, int64_t k, bint check):
        cdef vector[int64_t] rows
        cdef Py_ssize_t last_mer = -1
        while self.nv > 0:
            if self.min_degree() >= 3:
                self.row(&rows, k, K_INITIAL if last_mer < 0 else self.classify(last_mer, self.kinds.size()), check)
                last_mer = self.kinds.size()
            self.step()
            if check:
                self.check_invariants()
        self.row(&rows, k, K_INITIAL if last_mer < 0 else self.classify(last_mer, self.kinds.size()), False)
        return _to_array(self.payload, rows)

    cdef object simulate(self, Py_ssize_t count, int64_t rmax):
        dhist = np.zeros((count, rmax + 1), dtype=np.int16)
        kinds = np.zeros(count, dtype=np.int8)
        cdef int16_t[:, ::1] dh = dhist
        cdef int8_t[::1] kd = kinds
        cdef vector[int64_t] before
        cdef int64_t r
        cdef Py_ssize_t t
        for r in range(rmax + 1):
            before.push_back(self.buckets[r].size() if r < <int64_t>self.buckets.size() else 0)
        for t in range(count):
            self.clear_log()
            self.step()
            while self.nv > 0 and self.min_degree() < 3:
                self.step()
            for r in range(rmax + 1):
                dh[t, r] = <int16_t>((self.buckets[r].size() if r < <int64_t>self.buckets.size() else 0) - before[r])
            kd[t] = self.classify(0, self.kinds.size())
            self.undo_log()
        return dhist, kinds


cdef object _to_array(vector[int64_t]& vec, vector[int64_t]& rows):
    out = np.empty(vec.size(), dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef size_t i
    for i in range(vec.size()):
        o[i] = vec[i]
    out_rows = np.empty(rows.size(), dtype=np.int64)
    o = out_rows
    for i in range(rows.size()):
        o[i] = rows[i]
    return out, out_rows


def reduce_run(ea, eb, inc_off, inc_data, alive, bucket_off, bucket_data, int64_t num_edges,
               state, int64_t k, bint check=False, bint match_double=True):
    """Run Reduce on an exported graph state.

    Returns ``(kinds, offsets, payload, rows, next_vertex_id, rng_state)``.
    """
    cdef _Engine eng = _Engine(ea, eb, inc_off, inc_data, alive, bucket_off, bucket_data, num_edges)
    cdef size_t i
    eng.rng = <uint64_t>(int(state) & _MASK)
    eng.match_double = match_double
    payload, rows = eng.run(k, check)
    kinds = np.empty(eng.kinds.size(), dtype=np.int8)
    offsets = np.empty(eng.offsets.size(), dtype=np.int64)
    cdef int8_t[::1] kv = kinds
    cdef int64_t[::1] ov = offsets
    for i in range(eng.kinds.size()):
        kv[i] = eng.kinds[i]
    for i in range(eng.offsets.size()):
        ov[i] = eng.offsets[i]
    return kinds, offsets, payload, rows, eng.inc.size(), int(eng.rng)


def simulate_hyperactions(g, rng, Py_ssize_t count, int64_t rmax, double_edge="match"):
    st = g._export_state()
    cdef _Engine eng = _Engine(st["ea"], st["eb"], st["inc_off"], st["inc_data"], st["alive"],
                               st["bucket_off"], st["bucket_data"], st["num_edges"])
    eng.rng = <uint64_t>(int(rng.state) & _MASK)
    eng.match_double = double_edge == "match"
    if eng.nv == 0 or eng.min_degree() < 3:
        raise ValueError("hyperaction simulation needs minimum degree at least 3")
    out = eng.simulate(count, rmax)
    rng.state = int(eng.rng)
    return out


def sample_pairing(degrees, rng, long max_tries):
    cdef const int64_t[::1] deg = np.ascontiguousarray(degrees, dtype=np.int64)
    cdef Py_ssize_t n = deg.shape[0], v, j, total = 0, r
    cdef long attempt
    cdef int64_t c, tmp
    cdef bint ok
    for v in range(n):
        total += deg[v]
    pts = np.empty(total, dtype=np.int64)
    cdef int64_t[::1] p = pts
    j = 0
    for v in range(n):
        for c in range(deg[v]):
            p[j] = v
            j += 1
    if max_tries <= 0:
        return pts, -1
    cdef uint64_t s = <uint64_t>(int(rng.state) & _MASK)
    for attempt in range(1, max_tries + 1):
        ok = True
        j = 0
        while j < total:
            r = j + 1 + <Py_ssize_t>rc_below(&s, total - j - 1)
            tmp = p[j + 1]
            p[j + 1] = p[r]
            p[r] = tmp
            if p[j] == p[j + 1]:
                ok = False
                break
            j += 2
        if ok:
            rng.state = int(s)
            return pts, attempt
    rng.state = int(s)
    return pts, -1


cdef int64_t _absorbed_from(const int64_t[::1] p, int64_t at, int64_t n, int64_t edge) except -2:
    cdef int64_t i
    for i in range(n):
        if p[at + 2 * i] == edge:
            return p[at + 2 * i + 1]
    raise InconsistentLog(f"matched edge {edge} not absorbed by the contraction")


cdef inline int _pair(int64_t[::1] mate, int64_t x, int64_t y, int64_t e) except -1:
    if mate[x] != -1 or mate[y] != -1:
        raise InconsistentLog(f"vertex {x} or {y} already matched when adding edge {e}")
    mate[x] = e
    mate[y] = e
    return 0


def unwind_kernel(kinds, offsets, payload, Py_ssize_t nvid, rng):
    cdef const int8_t[::1] ks = np.ascontiguousarray(kinds, dtype=np.int8)
    cdef const int64_t[::1] offs = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef const int64_t[::1] p = np.ascontiguousarray(payload, dtype=np.int64)
    out = np.full(nvid, -1, dtype=np.int64)
    cdef int64_t[::1] mate = out
    cdef uint64_t s = <uint64_t>(int(rng.state) & _MASK)
    cdef Py_ssize_t i
    cdef int64_t o, v, e1, a, e2, b, u, w, f1, f2, rem, new, ns, at, me, src, r, code
    for i in range(ks.shape[0] - 1, -1, -1):
        code = ks[i]
        o = offs[i]
        if code == VZ or code == MER:
            continue
        if code == ONE:
            _pair(mate, p[o], p[o + 1], p[o + 2])
        elif code == CON:
            v = p[o]; e1 = p[o + 1]; a = p[o + 2]; e2 = p[o + 3]; b = p[o + 4]
            new = p[o + 5]; ns = p[o + 6]
            at = o + 7 + ns
            at += 1 + 3 * p[at]
            me = mate[new]
            mate[new] = -1
            if me >= 0:
                src = _absorbed_from(p, at + 1, p[at], me)
                mate[src] = me
                if ns == 3:
                    if src == a:
                        _pair(mate, v, b, e2)
                    elif src == b:
                        _pair(mate, v, a, e1)
                    else:
                        rng.state = int(s)
                        raise InconsistentLog(f"edge {me} returned to the contracted vertex {v}")
            elif ns == 3:
                if rc_below(&s, 2) == 0:
                    _pair(mate, v, a, e1)
                else:
                    _pair(mate, v, b, e2)
            else:
                _pair(mate, v, a, e1 if rc_below(&s, 2) == 0 else e2)
        elif code == AUTO:
            u = p[o]; v = p[o + 1]; w = p[o + 2]; f1 = p[o + 3]; f2 = p[o + 4]; rem = p[o + 5]
            new = p[o + 6]; ns = p[o + 7]
            at = o + 8 + ns
            at += 1 + 3 * p[at]
            me = mate[new]
            mate[new] = -1
            if me >= 0:
                src = _absorbed_from(p, at + 1, p[at], me)
                mate[src] = me
                if ns == 3:
                    if src == w:
                        _pair(mate, u, v, rem)
                    elif src == v:
                        _pair(mate, u, w, f1 if rc_below(&s, 2) == 0 else f2)
                    else:
                        rng.state = int(s)
                        raise InconsistentLog(f"edge {me} returned to the degree-2 vertex {u}")
            else:
                r = rc_below(&s, 3)
                _pair(mate, u, w if r < 2 else v, f1 if r == 0 else (f2 if r == 1 else rem))
        else:
            raise InconsistentLog(f"unknown action code {code}")
    rng.state = int(s)
    return out
