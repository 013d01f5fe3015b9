package com.acme;

public abstract class AbstractShape implements Shape {
    protected static final double PI = 3.14159265358979;

    protected String name;

    public String describe() {
        System.out.println(label());
        return name;
    }

    protected String label() {
        return "shape:" + name;
    }
}
