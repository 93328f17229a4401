# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled twins of the hot-loop kernels.

Mirrors ``singling.kernels.pure`` operation for operation: same
accumulation order, same branch structure, same tie-breaking.  Together
with -ffp-contract=off at compile time this keeps both backends
bit-identical.  Keep the two files in lockstep when editing either.
"""

from libc.math cimport INFINITY, sqrt
from libc.stdlib cimport free, malloc

BACKEND_NAME = "compiled"

cdef double SQRT2 = sqrt(2.0)

cdef int[8] MOVE_X = [1, -1, 0, 0, 1, 1, -1, -1]
cdef int[8] MOVE_Y = [0, 0, 1, -1, 1, -1, 1, -1]


def step_positions(double[:, ::1] pos, double[::1] shepherd,
                   double repulsion_gain, double attraction_gain,
                   double shepherd_gain, double sensing_radius,
                   double speed_cap, bint saturation,
                   bint isolated_feel_shepherd,
                   double[:, ::1] out_pos, double[:, ::1] out_vel):
    """See singling.kernels.pure.step_positions."""
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t i, j
    cdef int count
    cdef double xi, yi, dx, dy, d, d3
    cdef double s1x, s1y, s2x, s2y
    cdef double dsx, dsy, ds, ds3, v3x, v3y
    cdef double v1x, v1y, v2x, v2y, mx, my, m, scale
    cdef double sx = shepherd[0]
    cdef double sy = shepherd[1]
    for i in range(n):
        xi = pos[i, 0]
        yi = pos[i, 1]
        count = 0
        s1x = 0.0
        s1y = 0.0
        s2x = 0.0
        s2y = 0.0
        for j in range(n):
            if j == i:
                continue
            dx = pos[j, 0] - xi
            dy = pos[j, 1] - yi
            d = sqrt(dx * dx + dy * dy)
            if d < sensing_radius:
                if d < 1e-9:
                    return i
                d3 = d * d * d
                s1x += dx / d3
                s1y += dy / d3
                s2x += dx / d
                s2y += dy / d
                count += 1
        if count == 0 and not isolated_feel_shepherd:
            out_pos[i, 0] = xi
            out_pos[i, 1] = yi
            out_vel[i, 0] = 0.0
            out_vel[i, 1] = 0.0
            continue
        dsx = sx - xi
        dsy = sy - yi
        ds = sqrt(dsx * dsx + dsy * dsy)
        if ds < 1e-9:
            return i
        ds3 = ds * ds * ds
        v3x = -(dsx / ds3)
        v3y = -(dsy / ds3)
        if count == 0:
            mx = shepherd_gain * v3x
            my = shepherd_gain * v3y
        else:
            v1x = -(s1x / count)
            v1y = -(s1y / count)
            v2x = s2x / count
            v2y = s2y / count
            mx = repulsion_gain * v1x + attraction_gain * v2x + shepherd_gain * v3x
            my = repulsion_gain * v1y + attraction_gain * v2y + shepherd_gain * v3y
        if saturation:
            m = sqrt(mx * mx + my * my)
            if m > speed_cap:
                scale = speed_cap / m
                mx = mx * scale
                my = my * scale
        out_pos[i, 0] = xi + mx
        out_pos[i, 1] = yi + my
        out_vel[i, 0] = mx
        out_vel[i, 1] = my
    return -1


cdef inline double _octile(long x, long y, long gx, long gy):
    cdef long dx = x - gx
    cdef long dy = y - gy
    cdef long lo, hi
    if dx < 0:
        dx = -dx
    if dy < 0:
        dy = -dy
    if dx < dy:
        lo = dx
        hi = dy
    else:
        lo = dy
        hi = dx
    return <double>(hi - lo) + SQRT2 * <double>lo


cdef inline bint _key_less(double f1, double h1, long i1, long t1,
                           double f2, double h2, long i2, long t2):
    # lexicographic (f, h, cell, push tag), matching Python tuple order
    if f1 != f2:
        return f1 < f2
    if h1 != h2:
        return h1 < h2
    if i1 != i2:
        return i1 < i2
    return t1 < t2


cdef struct HeapEntry:
    double f
    double h
    long idx
    long tag


cdef inline void _heap_push(HeapEntry* heap, Py_ssize_t* size,
                            double f, double h, long idx, long tag):
    cdef Py_ssize_t child = size[0]
    cdef Py_ssize_t parent_i
    cdef HeapEntry tmp
    heap[child].f = f
    heap[child].h = h
    heap[child].idx = idx
    heap[child].tag = tag
    size[0] += 1
    while child > 0:
        parent_i = (child - 1) >> 1
        if _key_less(heap[child].f, heap[child].h, heap[child].idx, heap[child].tag,
                     heap[parent_i].f, heap[parent_i].h, heap[parent_i].idx,
                     heap[parent_i].tag):
            tmp = heap[parent_i]
            heap[parent_i] = heap[child]
            heap[child] = tmp
            child = parent_i
        else:
            break


cdef inline HeapEntry _heap_pop(HeapEntry* heap, Py_ssize_t* size):
    cdef HeapEntry top = heap[0]
    cdef Py_ssize_t hole = 0
    cdef Py_ssize_t child
    cdef HeapEntry tmp
    size[0] -= 1
    heap[0] = heap[size[0]]
    while True:
        child = 2 * hole + 1
        if child >= size[0]:
            break
        if child + 1 < size[0] and _key_less(
                heap[child + 1].f, heap[child + 1].h, heap[child + 1].idx,
                heap[child + 1].tag, heap[child].f, heap[child].h,
                heap[child].idx, heap[child].tag):
            child += 1
        if _key_less(heap[child].f, heap[child].h, heap[child].idx, heap[child].tag,
                     heap[hole].f, heap[hole].h, heap[hole].idx, heap[hole].tag):
            tmp = heap[hole]
            heap[hole] = heap[child]
            heap[child] = tmp
            hole = child
        else:
            break
    return top


def astar_grid(const unsigned char[::1] blocked, int width, int height,
               int start, int goal):
    """See singling.kernels.pure.astar_grid."""
    if start == goal:
        return [start]
    cdef Py_ssize_t size = <Py_ssize_t>width * <Py_ssize_t>height
    cdef double* g = <double*>malloc(size * sizeof(double))
    cdef long* parent = <long*>malloc(size * sizeof(long))
    cdef unsigned char* closed = <unsigned char*>malloc(size)
    # each cell expands at most once and relaxes <= 8 neighbors
    cdef Py_ssize_t cap = 8 * size + 8
    cdef HeapEntry* heap = <HeapEntry*>malloc(cap * sizeof(HeapEntry))
    if g == NULL or parent == NULL or closed == NULL or heap == NULL:
        free(g); free(parent); free(closed); free(heap)
        raise MemoryError("astar_grid scratch allocation failed")
    cdef Py_ssize_t heap_size = 0
    cdef Py_ssize_t k
    cdef long pushes, cur, x, y, nx, ny, nidx, mi, gx, gy
    cdef double gc, ng, nh, cost
    cdef HeapEntry top
    cdef list path
    try:
        for k in range(size):
            g[k] = INFINITY
            parent[k] = -1
            closed[k] = 0
        gx = goal % width
        gy = goal // width
        g[start] = 0.0
        nh = _octile(start % width, start // width, gx, gy)
        _heap_push(heap, &heap_size, nh, nh, start, 0)
        pushes = 1
        while heap_size > 0:
            top = _heap_pop(heap, &heap_size)
            cur = top.idx
            if closed[cur]:
                continue
            closed[cur] = 1
            if cur == goal:
                path = [cur]
                while parent[cur] >= 0:
                    cur = parent[cur]
                    path.append(cur)
                path.reverse()
                return path
            x = cur % width
            y = cur // width
            gc = g[cur]
            for mi in range(8):
                nx = x + MOVE_X[mi]
                ny = y + MOVE_Y[mi]
                if nx < 0 or nx >= width or ny < 0 or ny >= height:
                    continue
                nidx = ny * width + nx
                if blocked[nidx] or closed[nidx]:
                    continue
                if MOVE_X[mi] != 0 and MOVE_Y[mi] != 0:
                    if blocked[y * width + nx] or blocked[ny * width + x]:
                        continue
                cost = 1.0 if mi < 4 else SQRT2
                ng = gc + cost
                if ng < g[nidx]:
                    g[nidx] = ng
                    parent[nidx] = cur
                    nh = _octile(nx, ny, gx, gy)
                    _heap_push(heap, &heap_size, ng + nh, nh, nidx, pushes)
                    pushes += 1
        return None
    finally:
        free(g)
        free(parent)
        free(closed)
        free(heap)
