//! Equation inputs shared by the parser tests.

/// Covers every expression node and left-hand side form.
pub const ROUND_TRIP_CORPUS: [&str; 24] = [
    "D[0.5] y = 1 - y^2",
    "D[a] y = -y",
    "D[a] y = 1 + 2*y + y^2",
    "1*D[2] y + 1*D[1.5] y + 1*y = 1 + t^1",
    "D[1.5] y = D[0.5] y",
    "D[1] y = y",
    "2*D[1] y - 3*y = 4",
    "D[2] y - 0.25*D[1] y + y = 0",
    "D[0.5] y = exp(2*t^a/a)",
    "D[0.5] y = exp(-1.5*t^a/a)*y",
    "D[a] y = sin(3*t^a/a)",
    "D[a] y = sin(-1*t^a/a + 0.25)",
    "D[a] y = cos(2*t^a/a - 1)",
    "D[a] y = cos(0*t^a/a)",
    "D[0.25] y = t^0.5 + t^0.75*y",
    "D[1] y = (1 + y)*(1 - y)",
    "D[1] y = -(y - 1)",
    "D[1] y = --y",
    "D[2] y = y*y*y - y^3",
    "D[2] y = D[1] y*D[1] y",
    "D[0.5] y = 1 - (2 - (3 - y))",
    "D[0.5] y = 0.001*y - 1e-7",
    "D[1.5] y = 2*(D[0.5] y + y)*exp(1*t^a/a)",
    "0.5*D[a] y = ((y))",
];

pub const MALFORMED: [&str; 17] = [
    "",
    "D[0.5] y",
    "D[0.5] y =",
    "= 1",
    "D[0.5 y = 1",
    "D[] y = 1",
    "D[0.5] x = 1",
    "D[0.5] y = 1 +* 2",
    "D[0.5] y = exp(t)",
    "D[0.5] y = sin(2*t^a/b)",
    "D[0.5] y = y^-1",
    "D[0.5] y = (1 + y",
    "D[0.5] y = 1)",
    "D[0.5] y = z",
    "D[0.5] y = 1 = 2",
    "D[0.5] y = 1e999",
    "D[0.5] y = é",
];
