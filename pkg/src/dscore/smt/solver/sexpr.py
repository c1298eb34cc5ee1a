"""Minimal s-expression reader for SMT-LIB2 scripts."""


class SexprError(ValueError):
    pass


def tokenize(text):
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            yield ch
            i += 1
            continue
        if ch == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise SexprError("unterminated quoted symbol")
            yield text[i:j + 1]
            i = j + 1
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 1
            if j >= n:
                raise SexprError("unterminated string")
            yield text[i:j + 1]
            i = j + 1
            continue
        j = i
        while j < n and text[j] not in " \t\r\n();":
            j += 1
        yield text[i:j]
        i = j


def parse_all(text):
    """Parse every top-level form in the script."""
    stack = [[]]
    for tok in tokenize(text):
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise SexprError("unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise SexprError("unbalanced '('")
    return stack[0]
