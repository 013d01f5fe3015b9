package com.acme;

import java.util.List;

public class Circle extends AbstractShape {
    private double radius;

    public double area() {
        return calcArea(radius);
    }

    private double calcArea(double r) {
        return square(r) * PI;
    }

    private double square(double x) {
        return x * x;
    }
}
