"""Small CDCL SAT solver: two-watched literals, 1UIP learning, geometric restarts."""


class Unsatisfiable(Exception):
    pass


class SatSolver:
    def __init__(self):
        self.nvars = 0
        self.clauses = []          # list[list[int]]
        self.watches = {}          # literal -> clause indices watching it
        self.assign = [0]          # var -> 0 unassigned / 1 true / -1 false
        self.level = [0]
        self.reason = [None]
        self.trail = []
        self.trail_lim = []
        self.activity = [0.0]
        self.var_inc = 1.0
        self.ok = True

    def new_var(self) -> int:
        self.nvars += 1
        self.assign.append(0)
        self.level.append(0)
        self.reason.append(None)
        self.activity.append(0.0)
        return self.nvars

    def value(self, lit: int) -> int:
        v = self.assign[abs(lit)]
        return v if lit > 0 else -v

    def add_clause(self, lits) -> bool:
        if not self.ok:
            return False
        out = []
        seen = set()
        for lit in lits:
            if -lit in seen:
                return True        # tautology
            if lit in seen:
                continue
            v = self.value(lit)
            if v == 1 and self.level[abs(lit)] == 0:
                return True
            if v == -1 and self.level[abs(lit)] == 0:
                continue
            seen.add(lit)
            out.append(lit)
        if not out:
            self.ok = False
            return False
        if len(out) == 1:
            if not self._enqueue(out[0], None):
                self.ok = False
                return False
            conflict = self._propagate()
            if conflict is not None:
                self.ok = False
                return False
            return True
        idx = len(self.clauses)
        self.clauses.append(out)
        self.watches.setdefault(out[0], []).append(idx)
        self.watches.setdefault(out[1], []).append(idx)
        return True

    def _enqueue(self, lit, reason) -> bool:
        v = self.value(lit)
        if v == 1:
            return True
        if v == -1:
            return False
        var = abs(lit)
        self.assign[var] = 1 if lit > 0 else -1
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.trail.append(lit)
        return True

    def _propagate(self):
        qhead = getattr(self, "_qhead", 0)
        while qhead < len(self.trail):
            lit = self.trail[qhead]
            qhead += 1
            false_lit = -lit
            watch_list = self.watches.get(false_lit)
            if not watch_list:
                continue
            kept = []
            i = 0
            conflict = None
            while i < len(watch_list):
                ci = watch_list[i]
                i += 1
                clause = self.clauses[ci]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                if self.value(clause[0]) == 1:
                    kept.append(ci)
                    continue
                moved = False
                for k in range(2, len(clause)):
                    if self.value(clause[k]) != -1:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watches.setdefault(clause[1], []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(ci)
                if not self._enqueue(clause[0], ci):
                    kept.extend(watch_list[i:])
                    conflict = clause
                    break
            self.watches[false_lit] = kept
            if conflict is not None:
                self._qhead = len(self.trail)
                return conflict
        self._qhead = qhead
        return None

    def _bump(self, var):
        self.activity[var] += self.var_inc
        if self.activity[var] > 1e100:
            for i in range(1, self.nvars + 1):
                self.activity[i] *= 1e-100
            self.var_inc *= 1e-100

    def _analyze(self, conflict):
        learnt = []
        seen = [False] * (self.nvars + 1)
        counter = 0
        lit = None
        clause = conflict
        index = len(self.trail)
        cur_level = len(self.trail_lim)
        while True:
            for q in (clause if lit is None else clause[1:] if clause[0] == lit else
                      [x for x in clause if x != lit]):
                var = abs(q)
                if not seen[var] and self.level[var] > 0:
                    seen[var] = True
                    self._bump(var)
                    if self.level[var] >= cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while True:
                index -= 1
                lit = self.trail[index]
                if seen[abs(lit)]:
                    break
            counter -= 1
            seen[abs(lit)] = False
            if counter == 0:
                break
            reason = self.reason[abs(lit)]
            clause = self.clauses[reason] if isinstance(reason, int) else reason
        learnt.insert(0, -lit)
        if len(learnt) == 1:
            return learnt, 0
        back = max(self.level[abs(q)] for q in learnt[1:])
        k = max(range(1, len(learnt)), key=lambda i: self.level[abs(learnt[i])])
        learnt[1], learnt[k] = learnt[k], learnt[1]
        return learnt, back

    def _cancel_until(self, level):
        if len(self.trail_lim) <= level:
            return
        bound = self.trail_lim[level]
        for lit in self.trail[bound:]:
            var = abs(lit)
            self.assign[var] = 0
            self.reason[var] = None
        del self.trail[bound:]
        del self.trail_lim[level:]
        self._qhead = min(getattr(self, "_qhead", 0), len(self.trail))

    def _decide(self):
        best = 0
        best_act = -1.0
        for var in range(1, self.nvars + 1):
            if self.assign[var] == 0 and self.activity[var] > best_act:
                best = var
                best_act = self.activity[var]
        return best

    def solve(self) -> bool:
        if not self.ok:
            return False
        conflicts_limit = 256
        total_conflicts = 0
        while True:
            conflict = self._propagate()
            if conflict is not None:
                if not self.trail_lim:
                    self.ok = False
                    return False
                total_conflicts += 1
                learnt, back = self._analyze(conflict)
                self._cancel_until(back)
                if len(learnt) == 1:
                    if not self._enqueue(learnt[0], None):
                        self.ok = False
                        return False
                else:
                    idx = len(self.clauses)
                    self.clauses.append(learnt)
                    self.watches.setdefault(learnt[0], []).append(idx)
                    self.watches.setdefault(learnt[1], []).append(idx)
                    self._enqueue(learnt[0], idx)
                self.var_inc *= 1.05
                if total_conflicts >= conflicts_limit:
                    conflicts_limit = int(conflicts_limit * 1.5)
                    self._cancel_until(0)
                continue
            var = self._decide()
            if var == 0:
                return True
            self.trail_lim.append(len(self.trail))
            self._enqueue(-var, None)   # negative phase first: zeros are common
