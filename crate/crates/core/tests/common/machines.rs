//! Fixture machines: three that halt at times 2, 3 and 5, and a self-loop.

pub const HALT2: &str = "states: q0 qa\ninit: q0\naccept: qa\nq0 0 -> qa 1 R\nq0 1 -> qa 1 R\n";
pub const HALT3: &str = "states: q0 q1 qa\ninit: q0\naccept: qa\n\
q0 0 -> q1 1 R\nq0 1 -> q1 1 R\nq1 0 -> qa 0 L\nq1 1 -> qa 0 L\n";
/// Writes 1 1, walks back left over them, then rejects.
pub const HALT5: &str = "states: q0 q1 q2 q3 qr\ninit: q0\nreject: qr\n\
q0 0 -> q1 1 R\nq0 1 -> q1 1 R\n\
q1 0 -> q2 1 L\nq1 1 -> q2 1 L\n\
q2 0 -> q3 0 L\nq2 1 -> q3 0 L\n\
q3 0 -> qr 1 R\nq3 1 -> qr 1 R\n";
pub const LOOP: &str = "states: q0 qa\ninit: q0\naccept: qa\nq0 0 -> q0 0 R\nq0 1 -> q0 1 R\n";
