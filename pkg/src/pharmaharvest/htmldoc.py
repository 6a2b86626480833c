"""Small HTML document model with just enough CSS selection for the adapters.

Selector grammar: simple selectors are ``tag``, ``#id``, ``.class``,
``[attr]``, ``[attr=value]`` and conjunctions thereof (``tr.pt-row``);
a space is the descendant combinator (``table#results tr``).
"""

from __future__ import annotations

import re
from html.parser import HTMLParser

VOID_TAGS = frozenset({
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr",
})


class Node:
    """One element: tag, attributes, children, and text fragments."""

    __slots__ = ("tag", "attrs", "children", "parent", "_texts")

    def __init__(self, tag: str, attrs: dict[str, str], parent: "Node | None"):
        self.tag = tag
        self.attrs = attrs
        self.children: list[Node] = []
        self.parent = parent
        self._texts: list[tuple[int, str]] = []   # (position among children, text)

    def text(self) -> str:
        """All descendant text, whitespace-collapsed."""
        parts: list[str] = []
        self._collect_text(parts)
        return re.sub(r"\s+", " ", "".join(parts)).strip()

    def _collect_text(self, parts: list[str]) -> None:
        # A text fragment recorded at position i precedes child i.
        merged: list[tuple[int, int, object]] = [
            (i, 1, c) for i, c in enumerate(self.children)
        ]
        merged += [(pos, 0, s) for pos, s in self._texts]
        for _, _, item in sorted(merged, key=lambda t: (t[0], t[1])):
            if isinstance(item, Node):
                item._collect_text(parts)
            else:
                parts.append(item)  # type: ignore[arg-type]

    def classes(self) -> list[str]:
        return self.attrs.get("class", "").split()

    def get(self, attr: str, default: str | None = None) -> str | None:
        return self.attrs.get(attr, default)

    def iter(self):
        """Depth-first iteration over this node and all descendants."""
        yield self
        for child in self.children:
            yield from child.iter()

    def select(self, selector: str) -> list["Node"]:
        steps = _parse_selector(selector)
        matches = [self] if _node_matches(self, steps[0]) and self.tag != "#root" else []
        matches += [n for n in self._descendants() if _node_matches(n, steps[0])]
        for step in steps[1:]:
            next_matches = []
            seen = set()
            for m in matches:
                for n in m._descendants():
                    if id(n) not in seen and _node_matches(n, step):
                        seen.add(id(n))
                        next_matches.append(n)
            matches = next_matches
        return matches

    def select_one(self, selector: str) -> "Node | None":
        found = self.select(selector)
        return found[0] if found else None

    def _descendants(self):
        for child in self.children:
            yield from child.iter()

    def __repr__(self) -> str:
        ident = f"#{self.attrs['id']}" if "id" in self.attrs else ""
        return f"<Node {self.tag}{ident}>"


_SIMPLE = re.compile(
    r"(?P<tag>[a-zA-Z][\w-]*)?"
    r"(?P<qualifiers>(?:[#.][\w-]+|\[[\w-]+(?:=[^\]]*)?\])*)$"
)
_QUAL = re.compile(r"[#.][\w-]+|\[[\w-]+(?:=[^\]]*)?\]")


def _split_compound(selector: str) -> list[str]:
    # Whitespace splits descendant steps, except inside [attr=value] brackets.
    parts: list[str] = []
    buf: list[str] = []
    depth = 0
    for ch in selector:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth = max(0, depth - 1)
        if ch.isspace() and depth == 0:
            if buf:
                parts.append("".join(buf))
                buf = []
        else:
            buf.append(ch)
    if buf:
        parts.append("".join(buf))
    return parts


def _parse_selector(selector: str) -> list[dict]:
    steps = []
    for part in _split_compound(selector):
        m = _SIMPLE.match(part)
        if not m:
            raise ValueError(f"unsupported selector {part!r}")
        step = {"tag": m.group("tag"), "id": None, "classes": [], "attrs": []}
        for q in _QUAL.findall(m.group("qualifiers") or ""):
            if q.startswith("#"):
                step["id"] = q[1:]
            elif q.startswith("."):
                step["classes"].append(q[1:])
            else:
                body = q[1:-1]
                if "=" in body:
                    k, v = body.split("=", 1)
                    step["attrs"].append((k, v.strip("\"'")))
                else:
                    step["attrs"].append((body, None))
        steps.append(step)
    if not steps:
        raise ValueError("empty selector")
    return steps


def _node_matches(node: Node, step: dict) -> bool:
    if step["tag"] and node.tag != step["tag"]:
        return False
    if step["id"] and node.attrs.get("id") != step["id"]:
        return False
    node_classes = node.classes()
    for cls in step["classes"]:
        if cls not in node_classes:
            return False
    for key, val in step["attrs"]:
        if key not in node.attrs:
            return False
        if val is not None and node.attrs[key] != val:
            return False
    return True


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = Node("#root", {}, None)
        self.stack = [self.root]

    def handle_starttag(self, tag, attrs):
        node = Node(tag, {k: (v or "") for k, v in attrs}, self.stack[-1])
        self.stack[-1].children.append(node)
        if tag not in VOID_TAGS:
            self.stack.append(node)

    def handle_startendtag(self, tag, attrs):
        node = Node(tag, {k: (v or "") for k, v in attrs}, self.stack[-1])
        self.stack[-1].children.append(node)

    def handle_endtag(self, tag):
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                break

    def handle_data(self, data):
        top = self.stack[-1]
        top._texts.append((len(top.children), data))


def parse_html(text: str) -> Node:
    """Parse HTML text into a node tree; returns the synthetic root."""
    builder = _TreeBuilder()
    builder.feed(text)
    builder.close()
    return builder.root


class Document:
    """A fetched or replayed page snapshot plus its URL."""

    def __init__(self, url: str, html: str):
        self.url = url
        self.html = html
        self.root = parse_html(html)

    def select(self, selector: str) -> list[Node]:
        return self.root.select(selector)

    def select_one(self, selector: str) -> Node | None:
        return self.root.select_one(selector)
