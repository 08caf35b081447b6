def is_variable(t):
    return t == str(t) and len(t) > 0 and t[0] >= "A" and t[0] <= "Z"


def is_compound(t):
    return t == list(t) and len(t) > 0


def walk(t, subst):
    while is_variable(t) and t in subst:
        t = subst[t]
    return t


def occurs(v, t, subst):
    t = walk(t, subst)
    if t == v:
        return True
    if is_compound(t):
        for arg in t[1:]:
            if occurs(v, arg, subst):
                return True
    return False


def unify(a, b, subst):
    a = walk(a, subst)
    b = walk(b, subst)
    if a == b:
        return True
    if is_variable(a):
        if occurs(a, b, subst):
            return False
        subst[a] = b
        return True
    if is_variable(b):
        return unify(b, a, subst)
    if is_compound(a) and is_compound(b) and len(a) == len(b):
        for i in range(len(a)):
            if not unify(a[i], b[i], subst):
                return False
        return True
    return False


def unification(a, b):
    subst = {}
    if unify(a, b, subst):
        return subst
    return {"!": "fail"}
