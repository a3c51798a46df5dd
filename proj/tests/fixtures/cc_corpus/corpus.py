# Fixture for complexity counting. Each callable's expected value and the
# decision points behind it are listed in manifest.tsv.


def straight_line(a, b):
    total = a + b
    return total * 2


def single_if(x):
    if x > 0:
        return x
    return -x


def if_else(x):
    if x:
        y = 1
    else:
        y = 2
    return y


def if_elif_else(x):
    if x < 0:
        return "neg"
    elif x == 0:
        return "zero"
    elif x < 10:
        return "small"
    else:
        return "large"


def for_loop(items):
    acc = 0
    for item in items:
        acc += item
    return acc


def while_loop(n):
    while n > 1:
        n //= 2
    return n


def for_else(items, target):
    for item in items:
        if item == target:
            break
    else:
        return None
    return target


def while_true_break(stream):
    while True:
        chunk = stream.read()
        if not chunk:
            break
    return stream


def try_except(path):
    try:
        return open(path)
    except OSError:
        return None


def try_multi_except(fn):
    try:
        fn()
    except ValueError:
        return 1
    except (TypeError, KeyError):
        return 2
    except Exception:
        return 3
    else:
        return 0
    finally:
        fn = None


def bool_and_condition(a, b):
    if a and b:
        return True
    return False


def bool_chain(a, b, c, d):
    if a and b or c and d:
        return 1
    return 0


def bool_outside_condition(a, b):
    flag = a and b
    return flag or a


def while_bool(a, b):
    while a or b:
        a, b = b, None
    return a


def ternary(x):
    return "even" if x % 2 == 0 else "odd"


def ternary_bool_test(x, y):
    return x if x and y else y


def nested_ternary(x):
    return -1 if x < 0 else (0 if x == 0 else 1)


def list_comprehension(xs):
    return [x * 2 for x in xs]


def filtered_comprehension(xs):
    return [x for x in xs if x > 0]


def double_filter_comprehension(xs):
    return [x for x in xs if x > 0 if x < 9 and x != 5]


def nested_comprehension(rows):
    return {c for row in rows for c in row}


def dict_comprehension(pairs):
    return {k: v for k, v in pairs if v is not None}


def generator_expression(xs):
    return sum(x * x for x in xs)


def lambda_folded(xs):
    key = lambda x: x if x > 0 else -x
    return sorted(xs, key=key)


def nested_def_excluded(xs):
    def inner(v):
        if v:
            return v
        return 0

    for x in xs:
        inner(x)
    return xs


class Widget:
    def method_plain(self):
        return self

    def method_loops(self, grid):
        for row in grid:
            for cell in row:
                if cell:
                    self.hit = cell
        return self

    async def async_fetch(self, source):
        async for item in source:
            try:
                await item
            except RuntimeError:
                pass
        return self


def match_statement(cmd):
    match cmd:
        case "go":
            return 1
        case "stop" | "halt":
            return 2
        case [x, y] if x and y:
            return 3
        case _:
            return 0


def with_and_assert(path):
    with open(path) as fh:
        data = fh.read()
    assert data, "empty"
    return data


def walrus_if(xs):
    if (n := len(xs)) > 3:
        return n
    return 0


def elif_with_bool(x, y):
    if x or y:
        return 1
    elif x and not y:
        return 2
    return 3


def big_mixed(records, limit):
    out = []
    for rec in records:
        if rec is None or not rec.valid:
            continue
        try:
            value = int(rec.value)
        except ValueError:
            continue
        except TypeError:
            value = 0
        while value > limit:
            value -= limit
        out.append(value if value else None)
    return [v for v in out if v is not None]


def decorated(fn):
    return fn


@decorated
def decorated_target(x):
    if x:
        return x
    return None


def fstring_opaque(name, flag):
    return f"{name if flag else 'anon'}"


def comprehension_in_condition(xs):
    if any(x > 0 for x in xs):
        return [x for x in xs if x]
    return []


def while_else_with_bool(n, m):
    while n > 0 and m > 0:
        n -= 1
    else:
        m = 0
    return m
