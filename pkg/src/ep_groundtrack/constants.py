"""Physical constants (SI units) shared across the package."""

MU_EARTH = 3.986004418e14  # m^3/s^2
R_EARTH = 6378137.0  # m, equatorial
OMEGA_EARTH = 7.2921159e-5  # rad/s, sidereal rotation rate
J2 = 1.08263e-3

# Unnormalized zonal coefficients J2..J6 (EGM96).
ZONAL_J = (1.08263e-3, -2.53266e-6, -1.61962e-6, -2.27296e-7, 5.40681e-7)

MU_SUN = 1.32712440018e20  # m^3/s^2
MU_MOON = 4.9028e12  # m^3/s^2
AU = 1.495978707e11  # m
SOLAR_PRESSURE_1AU = 4.56e-6  # N/m^2

SECONDS_PER_DAY = 86400.0
JD_J2000 = 2451545.0
