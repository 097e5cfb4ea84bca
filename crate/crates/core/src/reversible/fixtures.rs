//! Small single-tape machines. Each reads its input from cell 0 and halts
//! with the head back on cell 0.

use super::TMSpec;

const IDENTITY: &str = "
start: s
halt: h
s N -> h
";

// Reversible as it stands: a marker left of the input makes the entry into
// the loop and the final return distinguishable, so the start state is
// never re-entered and every state has one way in.
const NOT: &str = "
start: a
halt: h
a L -> a1
a1 _->> -> m
s 0->1 -> m
s 1->0 -> m
s _->_ -> back
m R -> s
back L -> b
b 0->0 -> back
b 1->1 -> back
b >->> -> e
e >->_ -> f
f R -> h
";

// Binary counter mod 2^n, most significant bit first: run to the right
// end, then propagate the carry leftwards.
const INCREMENT: &str = "
start: s
halt: h
s 0->0 -> sr
s 1->1 -> sr
s _->_ -> c0
sr R -> s
c0 L -> c
c 1->0 -> cl
c 0->1 -> dn
c _->_ -> fin
cl L -> c
dn L -> d
d 0->0 -> dn
d 1->1 -> dn
d _->_ -> fin
fin R -> h
";

const DECREMENT: &str = "
start: s
halt: h
s 0->0 -> sr
s 1->1 -> sr
s _->_ -> c0
sr R -> s
c0 L -> c
c 0->1 -> cl
c 1->0 -> dn
c _->_ -> fin
cl L -> c
dn L -> d
d 0->0 -> dn
d 1->1 -> dn
d _->_ -> fin
fin R -> h
";

// x -> x|x: mark the next unread bit (a for 0, b for 1), append it after
// the separator, come back and restore it.
const COPY: &str = "
start: s0
halt: h
s0 0->0 -> s0r
s0 1->1 -> s0r
s0 _->|  -> rw
s0r R -> s0
rw L -> rb
rb 0->0 -> rw
rb 1->1 -> rw
rb _->_ -> go
go R -> p
p 0->a -> m0
p 1->b -> m1
p |->| -> done
m0 R -> c0
c0 0->0 -> m0
c0 1->1 -> m0
c0 |->| -> m0
c0 _->0 -> ret
m1 R -> c1
c1 0->0 -> m1
c1 1->1 -> m1
c1 |->| -> m1
c1 _->1 -> ret
ret L -> r
r 0->0 -> ret
r 1->1 -> ret
r |->| -> ret
r a->0 -> adv
r b->1 -> adv
adv R -> p
done L -> dl
dl 0->0 -> done
dl 1->1 -> done
dl _->_ -> fin
fin R -> h
";

const TABLE: &[(&str, &str)] =
    &[("identity", IDENTITY), ("not", NOT), ("increment", INCREMENT), ("decrement", DECREMENT), ("copy", COPY)];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    TABLE.iter().map(|(n, _)| *n)
}

pub fn builtin(name: &str) -> Option<TMSpec> {
    TABLE
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| TMSpec::parse(text).expect("fixture text is well formed"))
}
