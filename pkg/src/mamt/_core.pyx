# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-trial step loop for the mamt strategy.

Array-based mirror of the pure-Python reference loop in mamt.engine; the two
must produce identical results (asserted by the test suite).  Agent ids are
1..n; -1 encodes nil / undefined throughout.
"""

import numpy as np

ctypedef unsigned long long u64

cdef u64 GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline u64 splitmix64(u64 x) nogil:
    cdef u64 z = x + GOLDEN
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline u64 rng_draw(u64 key, u64 counter) nogil:
    return splitmix64(key + GOLDEN * counter)


cdef int uf_find(int[:] uf, int x) nogil:
    while uf[x] != x:
        uf[x] = uf[uf[x]]
        x = uf[x]
    return x


def run_mamt(int[:] indptr, int[:] indices, int[:] edge_ids,
             int start, int goal, int n, int solver_kind, u64 solver_key,
             int step_cap, int record_heads, int check_inv):
    cdef int V = indptr.shape[0] - 1
    cdef int E = V - 1  # tree

    pos_a = np.full(n + 1, start, dtype=np.int32)
    newpos_a = np.full(n + 1, start, dtype=np.int32)
    atgoal_a = np.zeros(n + 1, dtype=np.int32)
    lact_a = np.ones(n + 1, dtype=np.int32)
    lbc_a = np.ones(n + 1, dtype=np.int32)
    dl_a = np.full(n + 1, -1, dtype=np.int32)
    target_a = np.full(n + 1, -1, dtype=np.int32)
    fuel_a = np.zeros(n + 1, dtype=np.int64)
    occ_a = np.zeros(V, dtype=np.int32)
    nodefirst_a = np.full(V, -1, dtype=np.int32)
    agentnext_a = np.full(n + 1, -1, dtype=np.int32)
    edgestamp_a = np.zeros(E, dtype=np.int32)
    nodestamp_a = np.zeros(V, dtype=np.int32)
    cand_a = np.zeros(n + 1, dtype=np.int32)
    candnt_a = np.zeros(n + 1, dtype=np.int32)
    uf_a = np.zeros(n + 1, dtype=np.int32)
    heads_a = np.full(step_cap if record_heads else 1, -1, dtype=np.int32)
    # solver bookkeeping (only the current head uses it)
    visited_a = np.zeros(V, dtype=np.int32)
    parr_a = np.full(V, -2, dtype=np.int32)
    queue_a = np.zeros(V + 1, dtype=np.int32)
    path_a = np.zeros(2 * V + 4, dtype=np.int32)
    anc_a = np.zeros(V + 1, dtype=np.int32)
    ancmark_a = np.full(V, -1, dtype=np.int32)
    chain_a = np.zeros(V + 1, dtype=np.int32)

    cdef int[:] pos = pos_a, newpos = newpos_a, atgoal = atgoal_a
    cdef int[:] L_act = lact_a, L_bc = lbc_a, dl_saved = dl_a, target = target_a
    cdef long long[:] fuel = fuel_a
    cdef int[:] occ = occ_a, node_first = nodefirst_a, agent_next = agentnext_a
    cdef int[:] edge_stamp = edgestamp_a, node_stamp = nodestamp_a
    cdef int[:] cand = cand_a, cand_nt = candnt_a, uf = uf_a, heads = heads_a
    cdef int[:] visited = visited_a, parr = parr_a, bqueue = queue_a
    cdef int[:] path = path_a, anc = anc_a, ancmark = ancmark_a, chain = chain_a

    cdef int qhead = 0, qtail = 0, pathlen = 0, pathpos = 0
    cdef int came_from = -1
    cdef u64 rng_count = 0

    L_act[0] = -1
    L_act[1] = -1
    L_bc[0] = -1
    L_bc[1] = -1

    cdef int head_id = 1
    cdef int done_count = 0
    cdef int head_arrival = -1
    cdef int conn_violations = 0
    cdef int head_violations = 0
    cdef int status = 0  # 0 running, 1 success, 2 collision, 3 wall, 4 timeout
    cdef int makespan = -1

    cdef int step, i, j, k, k2, u, v, m, t, deg, base, idx
    cdef int dsolver, best, best_nt, L0, L1, ntL, dl, changed
    cdef int pending_to, pending_from, cnt, eid, start_occ, nt
    cdef int na, nc, meet, w, tgt, heads_active
    cdef int recorded = 0

    for step in range(1, step_cap + 1):
        # --- rebuild occupancy and per-node occupant lists (start-of-step) ---
        for v in range(V):
            node_first[v] = -1
            occ[v] = 0
        for i in range(n, 0, -1):
            u = pos[i]
            agent_next[i] = node_first[u]
            node_first[u] = i
            if not atgoal[i]:
                occ[u] += 1

        pending_to = -1
        pending_from = -1

        # --- decision phase ---
        for i in range(1, n + 1):
            if atgoal[i]:
                target[i] = -1
                continue
            u = pos[i]
            if L_act[i] == -1:
                # head: run the solver, then look for competitors on its target
                deg = indptr[u + 1] - indptr[u]
                base = indptr[u]
                if solver_kind == 0:
                    if came_from == -1:
                        dsolver = indices[base]
                    else:
                        idx = 0
                        for k in range(deg):
                            if indices[base + k] == came_from:
                                idx = k
                                break
                        dsolver = indices[base + ((idx + 1) % deg)]
                    came_from = u
                elif solver_kind == 2:
                    dsolver = indices[base + <int>(rng_draw(solver_key, rng_count) % <u64>deg)]
                    rng_count += 1
                else:
                    # physical breadth-first search
                    if not visited[u]:
                        visited[u] = 1
                        for k in range(deg):
                            v = indices[base + k]
                            if (not visited[v]) and parr[v] == -2:
                                parr[v] = u
                                bqueue[qtail] = v
                                qtail += 1
                    if pathpos >= pathlen:
                        if qhead >= qtail:
                            status = 3  # solver exhausted: treat as wall fault (bug guard)
                            break
                        tgt = bqueue[qhead]
                        qhead += 1
                        # walk u .. tgt through the discovery tree
                        na = 0
                        v = u
                        while True:
                            anc[na] = v
                            ancmark[v] = na
                            na += 1
                            if parr[v] == -1 or parr[v] == -2:
                                break
                            v = parr[v]
                        nc = 0
                        v = tgt
                        while ancmark[v] == -1:
                            chain[nc] = v
                            nc += 1
                            v = parr[v]
                        meet = ancmark[v]
                        pathlen = 0
                        for k in range(1, meet + 1):
                            path[pathlen] = anc[k]
                            pathlen += 1
                        for k in range(nc - 1, -1, -1):
                            path[pathlen] = chain[k]
                            pathlen += 1
                        for k in range(na):
                            ancmark[anc[k]] = -1
                        pathpos = 0
                    dsolver = path[pathpos]
                    pathpos += 1

                cnt = _enumerate_comm(i, pos, atgoal, occ, node_first, agent_next,
                                      indptr, indices, goal, cand, cand_nt)
                best = -1
                for t in range(cnt):
                    j = cand[t]
                    if pos[j] == goal:
                        continue
                    if cand_nt[t] != dsolver:
                        continue
                    if L_bc[j] != -1 and pos[j] == start and pos[L_bc[j]] == start:
                        continue
                    if best == -1 or j < best:
                        best = j
                dl_saved[i] = -1
                if best == -1:
                    target[i] = dsolver
                else:
                    target[i] = u
                    L_act[i] = best
                    pending_to = best
                    pending_from = i
            else:
                # follower: resolve leader conflicts, then track the leader
                L0 = L_act[i]
                ntL = _node_towards(i, L0, pos, indptr, indices, occ, goal)
                cnt = _enumerate_comm(i, pos, atgoal, occ, node_first, agent_next,
                                      indptr, indices, goal, cand, cand_nt)
                best = -1
                best_nt = -1
                for t in range(cnt):
                    j = cand[t]
                    nt = cand_nt[t]
                    if pos[j] == goal:
                        continue
                    if nt != u and (ntL == -1 or nt != ntL):
                        continue
                    if j == L0 and nt != u:
                        continue
                    if L_bc[j] != -1 and pos[j] == start and pos[L_bc[j]] == start:
                        continue
                    if best == -1 or j < best:
                        best = j
                        best_nt = nt
                if best != -1 and best < i:
                    L1 = best
                    dl = best_nt
                else:
                    L1 = L0
                    dl = ntL
                changed = 1 if L1 != L0 else 0
                L_act[i] = L1
                dl_saved[i] = dl
                target[i] = u
                if (not changed) and dl != -1:
                    if atgoal[L1] or not (dl != goal and occ[dl] > 0):
                        target[i] = dl
        if status != 0:
            break

        # --- movement phase ---
        start_occ = 1 if occ[start] > 0 else 0
        for i in range(1, n + 1):
            if atgoal[i]:
                continue
            u = pos[i]
            t = target[i]
            newpos[i] = u
            if t == u:
                continue
            eid = -1
            for k in range(indptr[u], indptr[u + 1]):
                if indices[k] == t:
                    eid = edge_ids[k]
                    break
            if eid == -1:
                status = 3
                break
            if edge_stamp[eid] == step:
                status = 2
                break
            edge_stamp[eid] = step
            if t == start and start_occ:
                status = 2
                break
            newpos[i] = t
        if status != 0:
            break
        for i in range(1, n + 1):
            if atgoal[i]:
                continue
            v = newpos[i]
            if v != start and v != goal:
                if node_stamp[v] == step:
                    status = 2
                    break
                node_stamp[v] = step
        if status != 0:
            break
        for i in range(1, n + 1):
            if atgoal[i]:
                continue
            if newpos[i] != pos[i]:
                fuel[i] += 1
                pos[i] = newpos[i]
                if pos[i] == goal:
                    atgoal[i] = 1
                    done_count += 1
                    if head_arrival == -1:
                        head_arrival = step

        # --- messaging phase: leader pointers become visible ---
        for i in range(1, n + 1):
            L_bc[i] = L_act[i]

        # --- heal / head-transfer phase (post-move positions) ---
        for v in range(V):
            node_first[v] = -1
            occ[v] = 0
        for i in range(n, 0, -1):
            u = pos[i]
            agent_next[i] = node_first[u]
            node_first[u] = i
            if not atgoal[i]:
                occ[u] += 1
        for i in range(1, n + 1):
            if atgoal[i]:
                continue
            if L_act[i] != -1:
                if _node_towards(i, L_act[i], pos, indptr, indices, occ, goal) == -1:
                    if dl_saved[i] != -1:
                        cnt = _enumerate_comm(i, pos, atgoal, occ, node_first, agent_next,
                                              indptr, indices, goal, cand, cand_nt)
                        best = -1
                        for t in range(cnt):
                            if cand_nt[t] == dl_saved[i]:
                                j = cand[t]
                                if best == -1 or j < best:
                                    best = j
                        if best != -1:
                            L_act[i] = best
        if pending_to != -1:
            # the payload is delivered only if the addressee is still in range
            if _node_towards(pending_from, pending_to, pos, indptr, indices, occ, goal) != -1:
                L_act[pending_to] = -1
                head_id = pending_to
            else:
                head_id = 0  # head role lost with the message; nobody recovers it

        if record_heads:
            heads[step - 1] = pos[head_id] if head_id > 0 else goal
            recorded = step

        if check_inv:
            heads_active = 0
            for i in range(1, n + 1):
                if (not atgoal[i]) and L_act[i] == -1:
                    heads_active += 1
            if (done_count == 0 and heads_active != 1) or (done_count > 0 and heads_active != 0):
                head_violations += 1
            if n > 1:
                for i in range(n + 1):
                    uf[i] = i
                j = -1
                for i in range(1, n + 1):
                    if atgoal[i]:
                        if j != -1:
                            uf[uf_find(uf, i)] = uf_find(uf, j)
                        j = i
                for i in range(1, n + 1):
                    if atgoal[i]:
                        continue
                    cnt = _enumerate_comm(i, pos, atgoal, occ, node_first, agent_next,
                                          indptr, indices, goal, cand, cand_nt)
                    for t in range(cnt):
                        uf[uf_find(uf, i)] = uf_find(uf, cand[t])
                j = uf_find(uf, 1)
                for i in range(2, n + 1):
                    if uf_find(uf, i) != j:
                        conn_violations += 1
                        break

        if done_count == n:
            status = 1
            makespan = step
            break

    if status == 0:
        status = 4
    status_name = {1: "success", 2: "collision_fault", 3: "wall_fault", 4: "timeout"}[status]
    return {
        "status": status_name,
        "makespan": makespan if status == 1 else None,
        "fuel": fuel_a[1:].tolist(),
        "head_arrival": head_arrival if head_arrival != -1 else None,
        "heads": heads_a[:recorded].tolist() if record_heads else None,
        "connectivity_violations": conn_violations,
        "head_violations": head_violations,
    }


cdef int _node_towards(int i, int j, int[:] pos, int[:] indptr, int[:] indices,
                       int[:] occ, int goal) nogil:
    """Receiver i's arrival node for sender j, or -1 when out of range."""
    cdef int u = pos[i]
    cdef int vj = pos[j]
    cdef int k, k2, m
    if vj == u:
        return u
    for k in range(indptr[u], indptr[u + 1]):
        if indices[k] == vj:
            return vj
    for k in range(indptr[u], indptr[u + 1]):
        m = indices[k]
        if m != goal and occ[m] > 0:
            continue
        for k2 in range(indptr[m], indptr[m + 1]):
            if indices[k2] == vj:
                return m
    return -1


cdef int _enumerate_comm(int i, int[:] pos, int[:] atgoal, int[:] occ,
                         int[:] node_first, int[:] agent_next,
                         int[:] indptr, int[:] indices, int goal,
                         int[:] cand, int[:] cand_nt) nogil:
    """Fill cand/cand_nt with i's communication neighbors and their arrival
    nodes; returns the count.  Co-located, adjacent, then two-hop through
    unoccupied middle nodes (each neighbor appears exactly once on a tree)."""
    cdef int u = pos[i]
    cdef int cnt = 0
    cdef int j, k, k2, w, m
    j = node_first[u]
    while j != -1:
        if j != i:
            cand[cnt] = j
            cand_nt[cnt] = u
            cnt += 1
        j = agent_next[j]
    for k in range(indptr[u], indptr[u + 1]):
        w = indices[k]
        j = node_first[w]
        while j != -1:
            cand[cnt] = j
            cand_nt[cnt] = w
            cnt += 1
            j = agent_next[j]
    for k in range(indptr[u], indptr[u + 1]):
        m = indices[k]
        if m != goal and occ[m] > 0:
            continue
        for k2 in range(indptr[m], indptr[m + 1]):
            w = indices[k2]
            if w == u:
                continue
            j = node_first[w]
            while j != -1:
                cand[cnt] = j
                cand_nt[cnt] = m
                cnt += 1
                j = agent_next[j]
    return cnt
